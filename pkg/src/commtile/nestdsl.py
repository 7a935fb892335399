"""Tiny loop-nest language for describing access maps by hand.

Grammar:

    loop (i1, ..., id) { Name[expr, ...]; ... }

where each expr is an integer linear combination of the loop indices, e.g.
``A[3x - y]`` or ``B[i, j + k]``.  No constant terms, no products of
indices.  ``#`` starts a comment running to end of line.
"""

from __future__ import annotations

from dataclasses import dataclass

from .problem import ProblemDocument


class ParseError(Exception):
    """Base parse failure, carrying 1-based line/column."""

    def __init__(self, line: int, col: int, message: str):
        super().__init__(message)
        self.line = line
        self.col = col
        self.message = message

    def __str__(self) -> str:
        return f"error:{self.line}:{self.col}: {self.message}"


class NestSyntaxError(ParseError):
    pass


class NonlinearSubscript(ParseError):
    pass


class UnknownIndex(ParseError):
    pass


@dataclass(frozen=True)
class _Token:
    kind: str  # ident | int | sym | eof
    text: str
    line: int
    col: int


_SYMS = set("(){}[],;+-*")
_MINUS_ALIASES = {"−", "–"}  # unicode minus / en dash from pasted text


def _tokenize(text: str) -> list[_Token]:
    toks = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch in _MINUS_ALIASES:
            ch = "-"
        if ch in _SYMS:
            toks.append(_Token("sym", ch, line, col))
            i += 1
            col += 1
            continue
        if ch.isdigit():
            start = i
            startcol = col
            while i < n and text[i].isdigit():
                i += 1
                col += 1
            toks.append(_Token("int", text[start:i], line, startcol))
            continue
        if ch.isalpha() or ch == "_":
            start = i
            startcol = col
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
                col += 1
            toks.append(_Token("ident", text[start:i], line, startcol))
            continue
        raise NestSyntaxError(line, col, f"unexpected character {ch!r}")
    toks.append(_Token("eof", "", line, col))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self) -> _Token:
        return self.toks[self.pos]

    def next(self) -> _Token:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect(self, kind: str, text: str | None = None) -> _Token:
        t = self.peek()
        if t.kind != kind or (text is not None and t.text != text):
            want = text if text is not None else kind
            got = t.text if t.text else "end of input"
            raise NestSyntaxError(t.line, t.col, f"expected {want!r}, found {got!r}")
        return self.next()

    def parse(self) -> ProblemDocument:
        kw = self.expect("ident")
        if kw.text != "loop":
            raise NestSyntaxError(kw.line, kw.col, "input must start with 'loop'")
        self.expect("sym", "(")
        indices = [self.expect("ident").text]
        while self.peek().text == ",":
            self.next()
            indices.append(self.expect("ident").text)
        self.expect("sym", ")")
        if len(set(indices)) != len(indices):
            raise NestSyntaxError(kw.line, kw.col, "loop indices must be distinct")
        index_pos = {name: i for i, name in enumerate(indices)}

        self.expect("sym", "{")
        arrays: list[tuple[str, tuple[tuple[int, ...], ...]]] = []
        seen = set()
        while self.peek().text != "}":
            name_tok = self.expect("ident")
            if name_tok.text in seen:
                raise NestSyntaxError(name_tok.line, name_tok.col, f"array {name_tok.text!r} listed twice")
            seen.add(name_tok.text)
            self.expect("sym", "[")
            rows = [self._expr(index_pos)]
            while self.peek().text == ",":
                self.next()
                rows.append(self._expr(index_pos))
            self.expect("sym", "]")
            self.expect("sym", ";")
            arrays.append((name_tok.text, tuple(rows)))
        self.expect("sym", "}")
        self.expect("eof")
        if not arrays:
            t = self.peek()
            raise NestSyntaxError(t.line, t.col, "loop body lists no array accesses")
        return ProblemDocument(len(indices), tuple(arrays), tuple(indices))

    def _expr(self, index_pos: dict[str, int]) -> tuple[int, ...]:
        coeffs = [0] * len(index_pos)
        first = True
        while True:
            sign = 1
            t = self.peek()
            if t.text == "+" or t.text == "-":
                self.next()
                sign = -1 if t.text == "-" else 1
            elif not first:
                break
            first = False
            self._term(index_pos, coeffs, sign)
        return tuple(coeffs)

    def _term(self, index_pos, coeffs, sign: int):
        t = self.next()
        coef = sign
        if t.kind == "int":
            coef *= int(t.text)
            nxt = self.peek()
            if nxt.text == "*":
                self.next()
                nxt = self.peek()
            if nxt.kind == "ident":
                t = self.next()
            elif nxt.kind == "int":
                raise NonlinearSubscript(nxt.line, nxt.col, "unexpected second integer in a term")
            else:
                raise NonlinearSubscript(
                    t.line, t.col, "constant terms are not allowed in subscripts"
                )
        if t.kind != "ident":
            raise NestSyntaxError(t.line, t.col, f"expected a loop index, found {t.text!r}")
        if self.peek().text == "*":
            star = self.next()
            raise NonlinearSubscript(star.line, star.col, "products of loop indices are not linear")
        if t.text not in index_pos:
            raise UnknownIndex(t.line, t.col, f"{t.text!r} is not a loop index")
        coeffs[index_pos[t.text]] += coef


def parse_loop_nest(text: str) -> ProblemDocument:
    """Parse the loop-nest DSL into a problem document."""
    return _Parser(text).parse()
