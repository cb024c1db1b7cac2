"""Solver models and their translation to and from formulas."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from ..formula import (
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
    nodes,
)
from ..grammar import PredicateGrammar
from .encoding import av, bv, cv, lv, node_labels, rv, xv


class MalformedModel(ValueError):
    pass


@dataclass
class SolverModel:
    """Variable assignment returned by a backend.

    ``objective`` is the attained ``Y`` (optimization) or the satisfied soft
    weight (max-weighted). ``root_values`` holds per-entry root semantics at
    position 0 as reported by the backend: ``(worst, best)`` robustness pairs
    in interval mode, strong satisfaction in point mode.
    """

    n: int
    assignment: dict = field(default_factory=dict)
    objective: float | None = None
    root_values: list = field(default_factory=list)
    optimal: bool = True
    formula: object = None

    def __getitem__(self, name: str):
        return self.assignment[name]

    def get(self, name: str, default=None):
        return self.assignment.get(name, default)


def unbig(v, big: float) -> float:
    """Map the ``±big`` stand-ins for infinity back to ``±inf``."""
    v = float(v)
    if big != math.inf and abs(v) >= big / 2:
        return math.copysign(math.inf, v)
    return v


def _threshold(v) -> float:
    return float(Fraction(v)) if not isinstance(v, float) else v


def decode_model(m: SolverModel, grammar: PredicateGrammar) -> Formula:
    """Rebuild the formula rooted at node ``n`` from a model."""
    labels = node_labels(grammar)
    built: dict[int, Formula] = {}

    def label_of(i):
        on = [lab for lab in labels if m.get(xv(i, lab))]
        if len(on) != 1:
            raise MalformedModel(f"node {i} has labels {on}")
        return on[0]

    def child(i, pick):
        ks = [k for k in range(1, i) if m.get(pick(i, k))]
        if len(ks) != 1:
            raise MalformedModel(f"node {i} has {len(ks)} candidate children")
        return ks[0]

    def build(i: int) -> Formula:
        if i in built:
            return built[i]
        lab = label_of(i)
        if lab.startswith("p"):
            fam = grammar.families[int(lab[1:])]
            out = fam.instantiate(_threshold(m.get(cv(i), 0.0)))
        elif lab == "top":
            out = Top()
        else:
            if i == 1:
                raise MalformedModel("node 1 must be atomic")
            left = build(child(i, lv))
            if lab in ("F", "G", "U"):
                w = TimeWindow(int(m[av(i)]), int(m[bv(i)]))
            if lab == "not":
                out = Not(left)
            elif lab == "F":
                out = Eventually(w, left)
            elif lab == "G":
                out = Always(w, left)
            else:
                right = build(child(i, rv))
                if lab == "U":
                    out = Until(w, left, right)
                else:
                    out = {"and": And, "or": Or, "imp": Implies}[lab](left, right)
        built[i] = out
        return out

    return build(m.n)


def node_order(phi: Formula) -> list[Formula]:
    """Topological order of ``phi``'s DAG with a predicate first when possible."""
    order = nodes(phi)
    first = next((k for k, nd in enumerate(order) if isinstance(nd, Predicate)), None)
    if first:
        order.insert(0, order.pop(first))
    return order


def encode_assignment(phi: Formula, n: int, grammar: PredicateGrammar, domains=None) -> dict:
    """Structural assignment whose root (node ``n``) decodes to ``phi``.

    Unused low-numbered nodes are filled with copies of a predicate at the
    bottom of its threshold domain.
    """
    order = node_order(phi)
    m = len(order)
    if m > n:
        raise ValueError(f"formula of size {m} does not fit into {n} nodes")
    labels = node_labels(grammar)
    pad = n - m
    if not isinstance(order[0], Predicate) and pad == 0:
        raise ValueError("node 1 must be a predicate but the formula has none to place there")
    ident = {id(nd): pad + k + 1 for k, nd in enumerate(order)}
    out: dict = {}

    def put(i, lab, left=None, right=None, window=None, threshold=0.0):
        for other in labels:
            out[xv(i, other)] = other == lab
        for k in range(1, i):
            out[lv(i, k)] = k == (left or 1)
            out[rv(i, k)] = k == (right or left or 1)
        out[av(i)], out[bv(i)] = (window.a, window.b) if window else (0, 1)
        out[cv(i)] = float(threshold)

    junk = 0.0 if domains is None else domains[0][0]
    for i in range(1, pad + 1):
        put(i, "p0", threshold=junk)
    for nd in order:
        i = ident[id(nd)]
        kids = [ident[id(c)] for c in nd.children]
        if isinstance(nd, Predicate):
            put(i, f"p{grammar.family_index(nd)}", threshold=nd.threshold)
        elif isinstance(nd, Top):
            put(i, "top")
        elif isinstance(nd, Not):
            put(i, "not", kids[0])
        elif isinstance(nd, (Eventually, Always)):
            put(i, "F" if isinstance(nd, Eventually) else "G", kids[0], window=nd.window)
        elif isinstance(nd, Until):
            put(i, "U", kids[0], kids[1], window=nd.window)
        else:
            lab = {And: "and", Or: "or", Implies: "imp"}[type(nd)]
            put(i, lab, kids[0], kids[1])
    return out
