"""Concrete syntax: lexer, parser, position-annotated trees, pretty-printer.

parse(pretty_print(t)) is structurally t (spans aside); parse accepts
either raw text or a token list from tokenize.
"""

from .lexer import LexicalError, Span, Token, tokenize
from .nodes import (
    AngleTuple,
    AtExpr,
    BinOp,
    BoolLit,
    BoxExpr,
    BraceLit,
    BracketEntry,
    BracketLit,
    Call,
    CtxBin,
    Described,
    DimDecl,
    Dot,
    Embed,
    EsDecl,
    FuncDecl,
    HashExpr,
    Ident,
    IfExpr,
    IntLit,
    MemberAssign,
    Node,
    NoObsLit,
    ObsDecl,
    OsDecl,
    RangeLit,
    RealLit,
    Select,
    SentinelLit,
    StreamBin,
    StreamUnary,
    StringLit,
    Subscript,
    TupleLit,
    UnaryOp,
    VarDecl,
    WhereExpr,
    ZeroObs,
)
from .parser import FlucidSyntaxError, parse
from .pretty import pretty_print

__all__ = [
    "AngleTuple", "AtExpr", "BinOp", "BoolLit", "BoxExpr", "BraceLit",
    "BracketEntry", "BracketLit", "Call", "CtxBin", "Described", "DimDecl",
    "Dot", "Embed", "EsDecl", "FlucidSyntaxError", "FuncDecl", "HashExpr",
    "Ident", "IfExpr", "IntLit", "LexicalError", "MemberAssign", "Node",
    "NoObsLit", "ObsDecl", "OsDecl", "RangeLit", "RealLit", "Select",
    "SentinelLit", "Span", "StreamBin", "StreamUnary", "StringLit",
    "Subscript", "Token", "TupleLit", "UnaryOp", "VarDecl", "WhereExpr",
    "ZeroObs", "parse", "pretty_print", "tokenize",
]
