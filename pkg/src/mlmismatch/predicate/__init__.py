"""Mismatch predicate language: tokenizer, parser, printer and evaluator."""
from .builtins import schema_compatible, schema_incompatibilities, subset, version_eq, version_lt
from .evaluator import EvalTrace, TriBool, evaluate
from .lexer import Token, tokenize
from .nodes import (
    BUILTIN_ARITY,
    BinOp,
    Call,
    FlagLit,
    Neg,
    Node,
    Not,
    NumberLit,
    PathRef,
    TextLit,
    collect_paths,
    pretty_print,
)
from .parser import parse_predicate

__all__ = [
    "BUILTIN_ARITY",
    "BinOp",
    "Call",
    "EvalTrace",
    "FlagLit",
    "Neg",
    "Node",
    "Not",
    "NumberLit",
    "PathRef",
    "TextLit",
    "Token",
    "TriBool",
    "collect_paths",
    "evaluate",
    "parse_predicate",
    "pretty_print",
    "schema_compatible",
    "schema_incompatibilities",
    "subset",
    "tokenize",
    "version_eq",
    "version_lt",
]
