"""Recursive-descent parser for mismatch predicates.

Grammar (lowest to highest precedence)::

    expr       := or_expr
    or_expr    := and_expr ("or" and_expr)*
    and_expr   := not_expr ("and" not_expr)*
    not_expr   := "not" not_expr | comparison
    comparison := additive (("<" | "<=" | ">" | ">=" | "==" | "!=") additive)?
    additive   := term (("+" | "-") term)*
    term       := unary (("*" | "/") unary)*
    unary      := "-" unary | primary
    primary    := NUMBER | STRING | "true" | "false" | PATH
                | BUILTIN "(" [expr ("," expr)*] ")" | "(" expr ")"
"""
from __future__ import annotations

from ..errors import PredicateError, SyntaxErr
from ..model import AttributePath
from .lexer import Token, tokenize
from .nodes import BUILTIN_ARITY, COMPARISONS, BinOp, Call, FlagLit, Neg, Node, Not, NumberLit, PathRef, TextLit

_PATH_ONLY = ("missing", "exists")


class _Parser:
    def __init__(self, source: str) -> None:
        self.tokens = tokenize(source)
        if self.tokens:
            last = self.tokens[-1]
            end = Token("EOF", "", None, last.line, last.column + len(last.text))
        else:
            end = Token("EOF", "", None, 1, 1)
        self.tokens.append(end)
        self.pos = 0

    @property
    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def at(self, kind: str, text: str | None = None) -> bool:
        tok = self.peek
        return tok.kind == kind and (text is None or tok.text == text)

    def fail(self, expected) -> SyntaxErr:
        tok = self.peek
        found = "end of input" if tok.kind == "EOF" else repr(tok.text)
        expected = sorted(expected)
        return SyntaxErr(f"unexpected {found}; expected one of {', '.join(expected)}", tok.line, tok.column, expected)

    def expect(self, kind: str, text: str) -> Token:
        if not self.at(kind, text):
            raise self.fail([repr(text)])
        return self.advance()

    def parse(self) -> Node:
        node = self.or_expr()
        if not self.at("EOF"):
            raise self.fail(["end of input", "operator"])
        return node

    def or_expr(self) -> Node:
        node = self.and_expr()
        while self.at("KEYWORD", "or"):
            self.advance()
            node = BinOp("or", node, self.and_expr())
        return node

    def and_expr(self) -> Node:
        node = self.not_expr()
        while self.at("KEYWORD", "and"):
            self.advance()
            node = BinOp("and", node, self.not_expr())
        return node

    def not_expr(self) -> Node:
        if self.at("KEYWORD", "not"):
            self.advance()
            return Not(self.not_expr())
        return self.comparison()

    def comparison(self) -> Node:
        node = self.additive()
        if self.at("OP") and self.peek.text in COMPARISONS:
            op = self.advance().text
            node = BinOp(op, node, self.additive())
            if self.at("OP") and self.peek.text in COMPARISONS:
                tok = self.peek
                raise SyntaxErr("comparison operators do not chain; add parentheses", tok.line, tok.column)
        return node

    def additive(self) -> Node:
        node = self.term()
        while self.at("OP") and self.peek.text in ("+", "-"):
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.at("OP") and self.peek.text in ("*", "/"):
            op = self.advance().text
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Node:
        if self.at("OP", "-"):
            self.advance()
            return Neg(self.unary())
        return self.primary()

    def primary(self) -> Node:
        tok = self.peek
        if tok.kind == "NUMBER":
            self.advance()
            return NumberLit(tok.value)
        if tok.kind == "STRING":
            self.advance()
            return TextLit(tok.value)
        if tok.kind == "KEYWORD" and tok.text in ("true", "false"):
            self.advance()
            return FlagLit(tok.text == "true")
        if tok.kind == "PATH":
            self.advance()
            return PathRef(AttributePath.parse(tok.text))
        if tok.kind == "IDENT":
            return self.call()
        if tok.kind == "LPAREN":
            self.advance()
            node = self.or_expr()
            self.expect("RPAREN", ")")
            return node
        raise self.fail(["number", "string", "true", "false", "attribute path", "builtin call", "'('", "'-'", "'not'"])

    def call(self) -> Node:
        tok = self.advance()
        if not self.at("LPAREN"):
            if tok.text in BUILTIN_ARITY:
                raise self.fail(["'('"])
            raise SyntaxErr(
                f"bare name {tok.text!r}; attribute paths need a root and at least one segment",
                tok.line,
                tok.column,
            )
        if tok.text not in BUILTIN_ARITY:
            raise PredicateError(f"unknown builtin {tok.text!r}", tok.column)
        self.advance()
        args: list[Node] = []
        if not self.at("RPAREN"):
            args.append(self.or_expr())
            while self.at("COMMA"):
                self.advance()
                args.append(self.or_expr())
        if not self.at("RPAREN"):
            raise self.fail(["','", "')'"])
        self.advance()
        arity = BUILTIN_ARITY[tok.text]
        if len(args) != arity:
            raise PredicateError(f"{tok.text} expects {arity} argument(s), got {len(args)}", tok.column)
        if tok.text in _PATH_ONLY and not isinstance(args[0], PathRef):
            raise PredicateError(f"{tok.text} expects an attribute path argument", tok.column)
        return Call(tok.text, tuple(args))


def parse_predicate(source: str) -> Node:
    return _Parser(source).parse()
