"""Tokenizer for predicate source text."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass

from ..errors import SyntaxErr

KEYWORDS = frozenset({"and", "or", "not", "true", "false"})


@dataclass(frozen=True)
class Token:
    kind: str  # NUMBER STRING PATH IDENT KEYWORD OP LPAREN RPAREN COMMA EOF
    text: str
    value: object = None
    line: int = 1
    column: int = 1


_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<number>\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*(?:\.[A-Za-z_][A-Za-z0-9_]*)*)
  | (?P<op><=|>=|==|!=|[-+*/<>])
  | (?P<lparen>\()
  | (?P<rparen>\))
  | (?P<comma>,)
    """,
    re.VERBOSE,
)


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        column = pos - line_start + 1
        if m is None:
            raise SyntaxErr(f"illegal character {source[pos]!r}", line, column)
        kind, text = m.lastgroup, m.group()
        if kind == "ws":
            newlines = text.count("\n")
            if newlines:
                line += newlines
                line_start = pos + text.rindex("\n") + 1
        elif kind == "number":
            value = float(text) if any(c in text for c in ".eE") else int(text)
            if value == float("inf"):
                raise SyntaxErr("numeric literal out of range", line, column)
            tokens.append(Token("NUMBER", text, value, line, column))
        elif kind == "string":
            try:
                value = json.loads(text)
            except json.JSONDecodeError:
                raise SyntaxErr("invalid escape in string literal", line, column) from None
            tokens.append(Token("STRING", text, value, line, column))
        elif kind == "name":
            if "." in text:
                tokens.append(Token("PATH", text, text, line, column))
            elif text in KEYWORDS:
                tokens.append(Token("KEYWORD", text, text, line, column))
            else:
                tokens.append(Token("IDENT", text, text, line, column))
        elif kind == "op":
            tokens.append(Token("OP", text, text, line, column))
        else:
            tokens.append(Token(kind.upper(), text, text, line, column))
        pos = m.end()
    return tokens
