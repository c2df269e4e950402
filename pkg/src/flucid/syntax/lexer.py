"""Tokenizer for the case-specification language.

Produces position-annotated tokens; every lexical error carries the span
of the offending text.  Notable lexemes:

  - hyphenated identifiers (flow-start, port-state): a hyphen is absorbed
    only directly between identifier characters when a letter or
    underscore follows, so spaced subtraction is unaffected;
  - INF+/INF- and the +INF/-INF spellings collapse to one sentinel each;
  - \\0 (and the typeset variant \\O before a parenthesis) starts a
    zero-observation; other backslash words are context operators;
  - two-word keywords (observation sequence, evidential statement) come
    out as two keyword tokens and are joined by the parser.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, List, Optional

from ..values import FlucidError


class LexicalError(FlucidError):
    def __init__(self, message: str, span: "Span"):
        super().__init__("%s at line %d, column %d" % (message, span.line, span.col))
        self.span = span


@dataclass(frozen=True)
class Span:
    line: int
    col: int
    offset: int
    end: int

    def merge(self, other: "Span") -> "Span":
        if other.offset < self.offset:
            return other.merge(self)
        return Span(self.line, self.col, self.offset, max(self.end, other.end))


@dataclass(frozen=True)
class Token:
    kind: str               # IDENT INT REAL STRING KW SYM EOF
    value: Any
    span: Span

    @property
    def raw(self) -> str:
        return str(self.value)


KEYWORDS = frozenset("""
    where end dimension observation sequence evidential statement
    ordered unordered finite infinite periodic nonperiodic
    if then else fi embed select Box true false in to step
    fby pby wvr rwvr nwvr nrwvr asa nasa ala nala
    upon rupon nupon nrupon nfby npby
    first next prev last second prelast nnext nprev iseod isbod
    neg not and or xor nand nor nxor band bor bxor
    combine product bel pl eod bod
""".split())

CONTEXT_OPS = frozenset([
    "isSubContext", "difference", "intersection", "projection",
    "hiding", "override", "union", "in",
])

# raised as unsupported, not silently mis-lexed as # applied to a name
HYBRID_SEGMENTS = frozenset(["JAVA", "CPP", "FORTRAN", "PERL", "PHP", "PYTHON"])

_SYMBOLS = [
    "=>", "==", "!=", "<=", ">=", "&&", "||", "!!", "!&",
    "@", "#", "$", "(", ")", "[", "]", "{", "}", "<", ">",
    ",", ";", ":", ".", "=", "+", "-", "*", "/", "%", "^", "!", "&", "~",
]


def _is_ident_start(c: str) -> bool:
    return c.isalpha() or c == "_"


def _is_ident_char(c: str) -> bool:
    return c.isalnum() or c == "_"


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def span_from(self, line: int, col: int, start: int) -> Span:
        return Span(line, col, start, self.pos)

    def error(self, message: str, start: Optional[int] = None) -> LexicalError:
        at = self.pos if start is None else start
        return LexicalError(message, Span(self.line, self.col, at, at + 1))

    def peek(self, ahead: int = 0) -> str:
        i = self.pos + ahead
        return self.text[i] if i < len(self.text) else ""

    def advance(self, n: int = 1) -> None:
        for _ in range(n):
            if self.pos < len(self.text):
                if self.text[self.pos] == "\n":
                    self.line += 1
                    self.col = 1
                else:
                    self.col += 1
                self.pos += 1


def tokenize(text: str) -> List[Token]:
    """Scan text into a token list ending with an EOF token."""
    s = _Scanner(text)
    out: List[Token] = []
    while s.pos < len(s.text):
        c = s.peek()
        if c in " \t\r\n":
            s.advance()
            continue
        if c == "/" and s.peek(1) == "/":
            while s.pos < len(s.text) and s.peek() != "\n":
                s.advance()
            continue
        if c == "/" and s.peek(1) == "*":
            line, col, start = s.line, s.col, s.pos
            s.advance(2)
            while s.pos < len(s.text) and not (s.peek() == "*" and s.peek(1) == "/"):
                s.advance()
            if s.pos >= len(s.text):
                raise LexicalError("unterminated block comment",
                                   Span(line, col, start, s.pos))
            s.advance(2)
            continue
        line, col, start = s.line, s.col, s.pos
        if c == "\x00" or (not c.isprintable() and c not in " \t\r\n"):
            raise s.error("illegal character %r" % c)
        if c == '"':
            out.append(_scan_string(s, line, col, start))
            continue
        if c.isdigit():
            out.append(_scan_number(s, line, col, start))
            continue
        if _is_ident_start(c):
            out.append(_scan_word(s, line, col, start))
            continue
        if c == "\\":
            out.append(_scan_backslash(s, line, col, start))
            continue
        if c in "+-" and s.text.startswith("INF", s.pos + 1) \
                and not _is_ident_char(s.peek(4)):
            s.advance(4)
            out.append(Token("SYM", "INF" + c, s.span_from(line, col, start)))
            continue
        if c == "#" and _is_ident_start(s.peek(1)):
            # reject hybrid-language segment markers up front
            j = s.pos + 1
            while j < len(s.text) and _is_ident_char(s.text[j]):
                j += 1
            word = s.text[s.pos + 1:j]
            if word in HYBRID_SEGMENTS:
                raise LexicalError("hybrid segments unsupported",
                                   Span(line, col, start, j))
        for sym in _SYMBOLS:
            if s.text.startswith(sym, s.pos):
                s.advance(len(sym))
                out.append(Token("SYM", sym, s.span_from(line, col, start)))
                break
        else:
            raise s.error("illegal character %r" % c)
    out.append(Token("EOF", "", Span(s.line, s.col, s.pos, s.pos)))
    return out


def _scan_string(s: _Scanner, line: int, col: int, start: int) -> Token:
    s.advance()
    parts: List[str] = []
    while True:
        if s.pos >= len(s.text):
            raise LexicalError("unterminated string", Span(line, col, start, s.pos))
        c = s.peek()
        if c == "\n":
            raise LexicalError("newline inside string", Span(line, col, start, s.pos))
        if c == '"':
            s.advance()
            return Token("STRING", "".join(parts), s.span_from(line, col, start))
        if c == "\\" and s.peek(1) in ('"', "\\"):
            parts.append(s.peek(1))
            s.advance(2)
            continue
        parts.append(c)
        s.advance()


def _scan_number(s: _Scanner, line: int, col: int, start: int) -> Token:
    while s.peek().isdigit():
        s.advance()
    is_real = False
    if s.peek() == "." and s.peek(1).isdigit():
        is_real = True
        s.advance()
        while s.peek().isdigit():
            s.advance()
    if s.peek() in "eE" and (s.peek(1).isdigit()
                             or (s.peek(1) in "+-" and s.peek(2).isdigit())):
        is_real = True
        s.advance()
        if s.peek() in "+-":
            s.advance()
        while s.peek().isdigit():
            s.advance()
    raw = s.text[start:s.pos]
    span = s.span_from(line, col, start)
    if is_real:
        return Token("REAL", float(raw), span)
    return Token("INT", int(raw), span)


def _scan_word(s: _Scanner, line: int, col: int, start: int) -> Token:
    while True:
        while _is_ident_char(s.peek()):
            s.advance()
        # hyphenated identifier continuation (flow-start, port-state)
        if s.peek() == "-" and s.pos > start and _is_ident_start(s.peek(1)):
            s.advance()
            continue
        break
    word = s.text[start:s.pos]
    span = s.span_from(line, col, start)
    if word == "INF" and s.peek() in "+-":
        sign = s.peek()
        s.advance()
        return Token("SYM", "INF" + sign, s.span_from(line, col, start))
    if word in KEYWORDS and "-" not in word:
        return Token("KW", word, span)
    return Token("IDENT", word, span)


def _scan_backslash(s: _Scanner, line: int, col: int, start: int) -> Token:
    s.advance()
    if s.peek() == "0":
        s.advance()
        return Token("SYM", "\\0", s.span_from(line, col, start))
    if _is_ident_start(s.peek()):
        j = s.pos
        while j < len(s.text) and _is_ident_char(s.text[j]):
            j += 1
        word = s.text[s.pos:j]
        if word == "O" and s.text[j:j + 1] == "(":
            s.advance()
            return Token("SYM", "\\0", s.span_from(line, col, start))
        if word in CONTEXT_OPS:
            s.advance(len(word))
            return Token("SYM", "\\" + word, s.span_from(line, col, start))
        raise LexicalError("unknown context operator \\%s" % word,
                           Span(line, col, start, j))
    # bare separator inside Box [dims \ predicate]
    return Token("SYM", "\\", s.span_from(line, col, start))
