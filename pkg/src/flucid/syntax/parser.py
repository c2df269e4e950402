"""Recursive-descent parser.

Precedence, tightest first: postfix (call, subscript, dot, adjacent
angle tuple) > unary (arithmetic sign, logical/bitwise negation, the
unary stream operators, #) > * / % > + - ^ > relational and `in` >
&& || and bitwise pairs > @ (left-assoc, tighter half of the
intensional tier) > fby-family/logical-word/combine/product
(right-assoc) > backslash context operators (left-assoc) > where.

Syntax errors carry the offending span and the expected-token set.
"""

from __future__ import annotations

from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from ..values import FlucidError
from .lexer import Span, Token, tokenize
from . import nodes as N

STREAM_BIN_OPS = frozenset("""
    fby pby wvr rwvr nwvr nrwvr asa nasa ala nala
    upon rupon nupon nrupon nfby npby
    and or xor nand nor nxor band bor bxor combine product
""".split())

STREAM_UNARY_OPS = frozenset("""
    first next prev last second prelast nnext nprev iseod isbod neg not
""".split())

FORENSIC_CALLS = frozenset(["bel", "pl", "combine", "product"])

CTX_OP_TOKENS = frozenset(
    "\\" + op for op in ("isSubContext", "difference", "intersection",
                         "projection", "hiding", "override", "union", "in"))

DIM_FLAGS = ("ordered", "unordered", "finite", "infinite",
             "periodic", "nonperiodic")

_EXPR_START_SYMS = frozenset(
    ["(", "[", "{", "#", "$", "\\0", "-", "+", "!", "~", "INF+", "INF-"])
_EXPR_START_KWS = frozenset(
    ["if", "select", "Box", "embed", "true", "false", "eod", "bod"]
) | STREAM_UNARY_OPS | FORENSIC_CALLS


class FlucidSyntaxError(FlucidError):
    def __init__(self, message: str, span: Span,
                 expected: Iterable[str] = ()):
        super().__init__("%s at line %d, column %d"
                         % (message, span.line, span.col))
        self.span = span
        self.expected: FrozenSet[str] = frozenset(expected)


class _Parser:
    def __init__(self, tokens: Sequence[Token]):
        self.tokens = list(tokens)
        self.pos = 0

    # --- token plumbing ----------------------------------------------------

    def peek(self, ahead: int = 0) -> Token:
        i = min(self.pos + ahead, len(self.tokens) - 1)
        return self.tokens[i]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def at_sym(self, *syms: str) -> bool:
        tok = self.peek()
        return tok.kind == "SYM" and tok.value in syms

    def at_kw(self, *words: str) -> bool:
        tok = self.peek()
        return tok.kind == "KW" and tok.value in words

    def fail(self, expected: Iterable[str]) -> FlucidSyntaxError:
        tok = self.peek()
        got = tok.raw if tok.kind != "EOF" else "end of input"
        exp = sorted(expected)
        if len(exp) == 1:
            msg = "expected %s, found %r" % (exp[0], got)
        else:
            msg = "expected one of %s, found %r" % (", ".join(exp), got)
        return FlucidSyntaxError(msg, tok.span, exp)

    def expect_sym(self, sym: str) -> Token:
        if not self.at_sym(sym):
            raise self.fail([sym])
        return self.advance()

    def expect_kw(self, word: str) -> Token:
        if not self.at_kw(word):
            raise self.fail([word])
        return self.advance()

    def expect_ident(self) -> Token:
        if self.peek().kind != "IDENT":
            raise self.fail(["identifier"])
        return self.advance()

    def _op_dim_suffix(self) -> Optional[str]:
        # fby.d / @.d : a dimension rider on an intensional operator
        if self.at_sym(".") and self.peek(1).kind == "IDENT":
            self.advance()
            return self.advance().value
        return None

    def _starts_expression(self) -> bool:
        tok = self.peek()
        if tok.kind in ("IDENT", "INT", "REAL", "STRING"):
            return True
        if tok.kind == "KW":
            return tok.value in _EXPR_START_KWS
        if tok.kind == "SYM":
            return tok.value in _EXPR_START_SYMS
        return False

    # --- expression levels --------------------------------------------------

    def parse_expr(self) -> N.Node:
        left = self.parse_ctx()
        while self.at_kw("where"):
            kw = self.advance()
            decls = self.parse_declarations()
            end = self.expect_kw("end")
            left = N.WhereExpr(left, tuple(decls),
                               span=left.span.merge(end.span) if left.span != N.DUMMY_SPAN else kw.span)
        return left

    def parse_ctx(self) -> N.Node:
        left = self.parse_stream()
        while self.peek().kind == "SYM" and self.peek().value in CTX_OP_TOKENS:
            op = self.advance().value[1:]
            right = self.parse_stream()
            left = N.CtxBin(op, left, right, span=left.span.merge(right.span))
        return left

    def parse_stream(self) -> N.Node:
        left = self.parse_at()
        if self.peek().kind == "KW" and self.peek().value in STREAM_BIN_OPS:
            op = self.advance().value
            dim = self._op_dim_suffix()
            annotation = None
            if self.at_sym("["):
                bracket = self.parse_bracket()
                if self._starts_expression():
                    annotation = bracket
                    right = self.parse_stream()
                else:
                    right = self._postfix_tail(bracket)
            else:
                right = self.parse_stream()
            return N.StreamBin(op, left, right, dim, annotation,
                               span=left.span.merge(right.span))
        return left

    def parse_at(self) -> N.Node:
        left = self.parse_logical()
        while self.at_sym("@"):
            self.advance()
            dim = self._op_dim_suffix()
            right = self.parse_logical()
            left = N.AtExpr(left, right, dim, span=left.span.merge(right.span))
        return left

    def parse_logical(self) -> N.Node:
        left = self.parse_rel()
        while self.at_sym("&&", "||", "&", "!!", "!&"):
            op = self.advance().value
            right = self.parse_rel()
            left = N.BinOp(op, left, right, span=left.span.merge(right.span))
        return left

    def parse_rel(self) -> N.Node:
        left = self.parse_add()
        while self.at_sym("<", ">", "<=", ">=", "==", "!=") or self.at_kw("in"):
            op = self.advance().value
            right = self.parse_add()
            left = N.BinOp(op, left, right, span=left.span.merge(right.span))
        return left

    def parse_add(self) -> N.Node:
        left = self.parse_mul()
        while self.at_sym("+", "-", "^"):
            op = self.advance().value
            right = self.parse_mul()
            left = N.BinOp(op, left, right, span=left.span.merge(right.span))
        return left

    def parse_mul(self) -> N.Node:
        left = self.parse_unary()
        while self.at_sym("*", "/", "%"):
            op = self.advance().value
            right = self.parse_unary()
            left = N.BinOp(op, left, right, span=left.span.merge(right.span))
        return left

    def parse_unary(self) -> N.Node:
        if self.at_sym("+", "-", "!", "~"):
            tok = self.advance()
            operand = self.parse_unary()
            return N.UnaryOp(tok.value, operand, span=tok.span.merge(operand.span))
        if self.peek().kind == "KW" and self.peek().value in STREAM_UNARY_OPS:
            tok = self.advance()
            dim = self._op_dim_suffix()
            operand = self.parse_unary()
            return N.StreamUnary(tok.value, operand, dim,
                                 span=tok.span.merge(operand.span))
        return self.parse_postfix()

    def parse_postfix(self) -> N.Node:
        return self._postfix_tail(self.parse_primary())

    def _postfix_tail(self, base: N.Node) -> N.Node:
        while True:
            if self.at_sym("("):
                self.advance()
                args = self._comma_exprs(")")
                close = self.expect_sym(")")
                base = N.Call(base, tuple(args), span=base.span.merge(close.span))
            elif self.at_sym("["):
                open_tok = self.advance()
                indices = self._comma_exprs("]")
                close = self.expect_sym("]")
                if not indices:
                    raise FlucidSyntaxError("empty subscript", open_tok.span,
                                            ["expression"])
                base = N.Subscript(base, tuple(indices),
                                   span=base.span.merge(close.span))
            elif self.at_sym(".") and (self.peek(1).kind == "IDENT"
                                       or (self.peek(1).kind == "SYM"
                                           and self.peek(1).value == "#")):
                self.advance()
                if self.at_sym("#"):
                    tok = self.advance()
                    member: N.Node = N.HashExpr(None, span=tok.span)
                else:
                    tok = self.advance()
                    member = N.Ident(tok.value, span=tok.span)
                base = N.Dot(base, member, span=base.span.merge(tok.span))
            elif self.at_sym("<") and self.peek().span.offset == base.span.end:
                tup = self._try_angle_tuple(base)
                if tup is None:
                    break
                base = tup
            else:
                break
        return base

    def _try_angle_tuple(self, base: N.Node) -> Optional[N.Node]:
        saved = self.pos
        try:
            self.advance()
            # items sit below the relational level so > stays the closer
            items = [self.parse_add()]
            while self.at_sym(","):
                self.advance()
                items.append(self.parse_add())
            close = self.expect_sym(">")
            return N.AngleTuple(base, tuple(items),
                                span=base.span.merge(close.span))
        except FlucidSyntaxError:
            self.pos = saved
            return None

    def _comma_exprs(self, closer: str) -> List[N.Node]:
        items: List[N.Node] = []
        if self.at_sym(closer):
            return items
        items.append(self.parse_expr())
        while self.at_sym(","):
            self.advance()
            items.append(self.parse_expr())
        return items

    # --- primaries -----------------------------------------------------------

    def parse_primary(self) -> N.Node:
        tok = self.peek()
        if tok.kind == "INT":
            self.advance()
            return N.IntLit(tok.value, span=tok.span)
        if tok.kind == "REAL":
            self.advance()
            return N.RealLit(tok.value, span=tok.span)
        if tok.kind == "STRING":
            self.advance()
            return N.StringLit(tok.value, span=tok.span)
        if tok.kind == "IDENT":
            self.advance()
            return N.Ident(tok.value, span=tok.span)
        if tok.kind == "SYM":
            if tok.value == "$":
                self.advance()
                return N.NoObsLit(span=tok.span)
            if tok.value in ("INF+", "INF-"):
                self.advance()
                return N.SentinelLit(tok.value, span=tok.span)
            if tok.value == "\\0":
                self.advance()
                self.expect_sym("(")
                prop = self.parse_expr()
                close = self.expect_sym(")")
                return N.ZeroObs(prop, span=tok.span.merge(close.span))
            if tok.value == "#":
                self.advance()
                if self.peek().kind == "IDENT" or self.at_sym("("):
                    target = self.parse_postfix()
                    return N.HashExpr(target, span=tok.span.merge(target.span))
                return N.HashExpr(None, span=tok.span)
            if tok.value == "(":
                return self._parse_paren(tok)
            if tok.value == "[":
                return self.parse_bracket()
            if tok.value == "{":
                return self._parse_brace(tok)
        if tok.kind == "KW":
            if tok.value in ("true", "false"):
                self.advance()
                return N.BoolLit(tok.value == "true", span=tok.span)
            if tok.value in ("eod", "bod"):
                self.advance()
                return N.SentinelLit(tok.value, span=tok.span)
            if tok.value == "if":
                return self._parse_if(tok)
            if tok.value == "select":
                self.advance()
                self.expect_sym("(")
                index = self.parse_expr()
                self.expect_sym(",")
                source = self.parse_expr()
                close = self.expect_sym(")")
                return N.Select(index, source, span=tok.span.merge(close.span))
            if tok.value == "Box":
                return self._parse_box(tok)
            if tok.value == "embed":
                self.advance()
                self.expect_sym("(")
                args = self._comma_exprs(")")
                close = self.expect_sym(")")
                if not args:
                    raise FlucidSyntaxError("embed needs a URI argument",
                                            close.span, ["expression"])
                return N.Embed(tuple(args), span=tok.span.merge(close.span))
            if tok.value in FORENSIC_CALLS and self.peek(1).kind == "SYM" \
                    and self.peek(1).value == "(":
                self.advance()
                self.expect_sym("(")
                args = self._comma_exprs(")")
                close = self.expect_sym(")")
                return N.Call(N.Ident(tok.value, span=tok.span), tuple(args),
                              span=tok.span.merge(close.span))
        raise self.fail(["expression"])

    def _parse_paren(self, open_tok: Token) -> N.Node:
        self.advance()
        items: List[N.Node] = []
        described = False
        while True:
            item = self.parse_expr()
            if self.at_sym("=>"):
                self.advance()
                if self.peek().kind != "STRING":
                    raise self.fail(["string"])
                text = self.advance()
                item = N.Described(item, text.value,
                                   span=item.span.merge(text.span))
                described = True
            items.append(item)
            if self.at_sym(","):
                self.advance()
                continue
            break
        close = self.expect_sym(")")
        if len(items) == 1 and not described:
            return items[0]
        return N.TupleLit(tuple(items), span=open_tok.span.merge(close.span))

    def parse_bracket(self) -> N.Node:
        open_tok = self.expect_sym("[")
        entries: List[N.BracketEntry] = []
        while not self.at_sym("]"):
            first = self.parse_expr()
            if self.at_sym(":", "=>"):
                self.advance()
                value = self.parse_expr()
                entries.append(N.BracketEntry(first, value,
                                              span=first.span.merge(value.span)))
            else:
                entries.append(N.BracketEntry(None, first, span=first.span))
            if self.at_sym(","):
                self.advance()
                continue
            break
        close = self.expect_sym("]")
        return N.BracketLit(tuple(entries), span=open_tok.span.merge(close.span))

    def _parse_brace(self, open_tok: Token) -> N.Node:
        self.advance()
        if self.at_sym("}"):
            close = self.advance()
            return N.BraceLit((), span=open_tok.span.merge(close.span))
        first = self.parse_expr()
        if self.at_kw("to"):
            self.advance()
            hi = self.parse_expr()
            step = None
            if self.at_kw("step"):
                self.advance()
                step = self.parse_expr()
            close = self.expect_sym("}")
            return N.RangeLit(first, hi, step,
                              span=open_tok.span.merge(close.span))
        items = [first]
        while self.at_sym(","):
            self.advance()
            items.append(self.parse_expr())
        close = self.expect_sym("}")
        return N.BraceLit(tuple(items), span=open_tok.span.merge(close.span))

    def _parse_if(self, tok: Token) -> N.Node:
        self.advance()
        cond = self.parse_ctx()
        self.expect_kw("then")
        then_branch = self.parse_ctx()
        self.expect_kw("else")
        else_branch = self.parse_ctx()
        close = self.expect_kw("fi")
        return N.IfExpr(cond, then_branch, else_branch,
                        span=tok.span.merge(close.span))

    def _parse_box(self, tok: Token) -> N.Node:
        self.advance()
        self.expect_sym("[")
        dims = [self.parse_expr()]
        while self.at_sym(","):
            self.advance()
            dims.append(self.parse_expr())
        self.expect_sym("\\")
        predicate = self.parse_expr()
        close = self.expect_sym("]")
        return N.BoxExpr(tuple(dims), predicate,
                         span=tok.span.merge(close.span))

    # --- declarations ---------------------------------------------------------

    def parse_declarations(self) -> List[N.Node]:
        decls: List[N.Node] = []
        if self.at_kw("end"):
            raise FlucidSyntaxError("a where clause needs at least one declaration",
                                    self.peek().span, ["declaration"])
        while not self.at_kw("end"):
            if self.peek().kind == "EOF":
                raise self.fail(["end"])
            decls.append(self.parse_declaration())
        return decls

    def parse_declaration(self) -> N.Node:
        if self.at_kw("dimension"):
            return self._parse_dim_decl()
        if self.at_kw("observation"):
            return self._parse_observation_decl()
        if self.at_kw("evidential"):
            return self._parse_es_decl()
        if self.peek().kind == "IDENT":
            return self._parse_assignment()
        raise self.fail(["dimension", "observation", "evidential statement",
                         "identifier"])

    def _parse_dim_decl(self) -> N.Node:
        kw = self.advance()
        names = [self.expect_ident().value]
        while self.at_sym(","):
            self.advance()
            names.append(self.expect_ident().value)
        flags: Tuple[str, ...] = ()
        tags = None
        value = None
        if self.at_sym(":"):
            self.advance()
            got: List[str] = []
            while self.peek().kind == "KW" and self.peek().value in DIM_FLAGS:
                got.append(self.advance().value)
            flags = tuple(got)
            if self.at_sym("{"):
                tags = self._parse_brace(self.peek())
            elif not flags:
                raise self.fail(["tag set", "ordering flag"])
        elif self.at_sym("="):
            self.advance()
            value = self.parse_expr()
        semi = self.expect_sym(";")
        return N.DimDecl(tuple(names), flags, tags, value,
                         span=kw.span.merge(semi.span))

    def _parse_observation_decl(self) -> N.Node:
        kw = self.advance()
        if self.at_kw("sequence"):
            self.advance()
            flags = self._decl_flags()
            name = self.expect_ident().value
            value = None
            if self.at_sym("="):
                self.advance()
                value = self.parse_expr()
            semi = self.expect_sym(";")
            return N.OsDecl(name, flags, value, span=kw.span.merge(semi.span))
        name = self.expect_ident().value
        value = None
        if self.at_sym("="):
            self.advance()
            value = self.parse_expr()
        semi = self.expect_sym(";")
        return N.ObsDecl(name, value, span=kw.span.merge(semi.span))

    def _parse_es_decl(self) -> N.Node:
        kw = self.advance()
        self.expect_kw("statement")
        flags = self._decl_flags()
        name = self.expect_ident().value
        value = None
        if self.at_sym("="):
            self.advance()
            value = self.parse_expr()
        semi = self.expect_sym(";")
        return N.EsDecl(name, flags, value, span=kw.span.merge(semi.span))

    def _decl_flags(self) -> Tuple[str, ...]:
        flags: List[str] = []
        while self.peek().kind == "KW" and self.peek().value in DIM_FLAGS:
            flags.append(self.advance().value)
        return tuple(flags)

    def _parse_assignment(self) -> N.Node:
        lhs = self.parse_postfix()
        self.expect_sym("=")
        rhs = self.parse_expr()
        semi = self.expect_sym(";")
        span = lhs.span.merge(semi.span)
        if isinstance(lhs, N.Ident):
            return N.VarDecl(lhs.name, rhs, span=span)
        if isinstance(lhs, N.Dot) and isinstance(lhs.member, N.Ident):
            return N.MemberAssign(lhs.base, lhs.member.name, rhs, span=span)
        if isinstance(lhs, N.Call):
            params = _ident_names(lhs.args)
            target = lhs.func
            if params is not None and isinstance(target, N.Ident):
                return N.FuncDecl(target.name, (), params, rhs, span=span)
            if params is not None and isinstance(target, N.Subscript) \
                    and isinstance(target.base, N.Ident):
                dims = _ident_names(target.indices)
                if dims is not None:
                    return N.FuncDecl(target.base.name, dims, params, rhs,
                                      span=span)
        raise FlucidSyntaxError("declaration target must be an identifier, "
                                "a function head, or a member", lhs.span,
                                ["identifier"])


def _ident_names(exprs: Sequence[N.Node]) -> Optional[Tuple[str, ...]]:
    names: List[str] = []
    for e in exprs:
        if not isinstance(e, N.Ident):
            return None
        names.append(e.name)
    return tuple(names)


def parse(source: Union[str, Sequence[Token]]) -> N.Node:
    """Parse a whole program (one expression, usually with a where)."""
    tokens = tokenize(source) if isinstance(source, str) else list(source)
    p = _Parser(tokens)
    tree = p.parse_expr()
    if p.at_sym(";"):
        p.advance()
    if p.peek().kind != "EOF":
        raise p.fail(["end of input"])
    return tree
