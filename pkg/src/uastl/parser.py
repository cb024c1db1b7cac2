"""Parser for the ASCII formula syntax.

    formula  := implies
    implies  := or ('->' implies)?            right associative
    or       := and ('|' and)*
    and      := until ('&' until)*
    until    := unary ('U[a,b)' unary)*       left associative
    unary    := '!' unary | 'F[a,b)' unary | 'G[a,b)' unary | atom
    atom     := 'T' | '(' formula ')' | predicate
    predicate:= term (('+'|'-') term)* ('>'|'<') number
    term     := ['-'] [number '*'] 'x'<k>
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .formula import (
    Always,
    And,
    Eventually,
    Formula,
    Implies,
    Not,
    Or,
    Predicate,
    TimeWindow,
    Top,
    Until,
)
from .grammar import GrammarError, PredicateGrammar


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<temporal>[FGU])\s*\[\s*(?P<a>\d+)\s*,\s*(?P<b>\d+)\s*\)
  | (?P<var>x(?P<idx>\d+))
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<top>T)(?![A-Za-z0-9_])
  | (?P<op>->|[!&|()<>+\-*~])
    """,
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int
    value: object = None


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if m.group("ws"):
            pass
        elif m.group("temporal"):
            toks.append(_Tok(m.group("temporal"), m.group(0), pos, (int(m.group("a")), int(m.group("b")))))
        elif m.group("var"):
            idx = int(m.group("idx"))
            if idx < 1:
                raise FormulaSyntaxError("variables are numbered from x1", pos, text)
            toks.append(_Tok("var", m.group(0), pos, idx))
        elif m.group("num"):
            toks.append(_Tok("num", m.group(0), pos, float(m.group("num"))))
        elif m.group("top"):
            toks.append(_Tok("T", "T", pos))
        else:
            op = m.group("op")
            toks.append(_Tok("!" if op == "~" else op, op, pos))
        pos = m.end()
        del kind
    toks.append(_Tok("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, dims: int, grammar: PredicateGrammar | None):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.dims = dims
        self.grammar = grammar

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.tok
        found = tok.text or "end of input"
        raise FormulaSyntaxError(f"{msg}, found {found!r}", tok.pos, self.text)

    def eat(self, kind: str) -> _Tok:
        if self.tok.kind != kind:
            self.error(f"expected {kind!r}")
        tok = self.tok
        self.i += 1
        return tok

    def window(self, tok: _Tok) -> TimeWindow:
        a, b = tok.value
        if not a < b:
            raise FormulaSyntaxError(f"window [{a},{b}) must have a < b", tok.pos, self.text)
        return TimeWindow(a, b)

    def parse(self) -> Formula:
        if self.tok.kind == "eof":
            self.error("empty formula")
        phi = self.implies()
        if self.tok.kind != "eof":
            self.error("unexpected token")
        return phi

    def implies(self) -> Formula:
        left = self.disj()
        if self.tok.kind == "->":
            self.i += 1
            return Implies(left, self.implies())
        return left

    def disj(self) -> Formula:
        out = self.conj()
        while self.tok.kind == "|":
            self.i += 1
            out = Or(out, self.conj())
        return out

    def conj(self) -> Formula:
        out = self.until()
        while self.tok.kind == "&":
            self.i += 1
            out = And(out, self.until())
        return out

    def until(self) -> Formula:
        out = self.unary()
        while self.tok.kind == "U":
            w = self.window(self.eat("U"))
            out = Until(w, out, self.unary())
        return out

    def unary(self) -> Formula:
        kind = self.tok.kind
        if kind == "!":
            self.i += 1
            return Not(self.unary())
        if kind in ("F", "G"):
            w = self.window(self.eat(kind))
            child = self.unary()
            return Eventually(w, child) if kind == "F" else Always(w, child)
        return self.atom()

    def atom(self) -> Formula:
        kind = self.tok.kind
        if kind == "T":
            self.i += 1
            return Top()
        if kind == "(":
            self.i += 1
            phi = self.implies()
            self.eat(")")
            return phi
        if kind in ("var", "num", "-"):
            return self.predicate()
        self.error("expected a formula")

    def term(self, sign: float, coeffs: dict):
        if self.tok.kind == "-":
            self.i += 1
            sign = -sign
        scale = 1.0
        if self.tok.kind == "num":
            scale = self.eat("num").value
            self.eat("*")
        var = self.eat("var")
        if var.value > self.dims:
            raise FormulaSyntaxError(f"x{var.value} exceeds signal dimension {self.dims}", var.pos, self.text)
        coeffs[var.value - 1] = coeffs.get(var.value - 1, 0.0) + sign * scale

    def predicate(self) -> Predicate:
        start = self.tok
        coeffs: dict[int, float] = {}
        self.term(1.0, coeffs)
        while self.tok.kind in ("+", "-"):
            sign = 1.0 if self.tok.kind == "+" else -1.0
            self.i += 1
            self.term(sign, coeffs)
        if self.tok.kind not in (">", "<"):
            self.error("expected '>' or '<' in predicate")
        sense = self.tok.kind
        self.i += 1
        neg = False
        if self.tok.kind == "-":
            neg = True
            self.i += 1
        c = self.eat("num").value
        w = [0.0] * self.dims
        for k, v in coeffs.items():
            w[k] = v
        if not any(w):
            raise FormulaSyntaxError("predicate has no nonzero coefficient", start.pos, self.text)
        pred = Predicate(tuple(w), -c if neg else c, sense)
        if self.grammar is not None and not self.grammar.admits(pred):
            raise GrammarError(f"predicate '{pred}' at position {start.pos} is outside the grammar")
        return pred


def parse_formula(text: str, grammar: PredicateGrammar | None = None, dims: int | None = None) -> Formula:
    """Parse ``text`` into a formula tree.

    The signal dimension comes from ``grammar``, then ``dims``, and otherwise
    from the largest variable index in the text. When a grammar is given,
    every predicate must belong to one of its families.
    """
    if grammar is not None:
        if dims is not None and dims != grammar.dims:
            raise ValueError("dims disagrees with grammar.dims")
        dims = grammar.dims
    if dims is None:
        idx = [int(m) for m in re.findall(r"x(\d+)", text)]
        dims = max(idx, default=1)
    return _Parser(text, dims, grammar).parse()
