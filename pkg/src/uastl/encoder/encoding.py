"""Syntax-DAG constraint systems in SMT-LIB text.

Nodes are numbered ``1..n``; node ``n`` is the root and node 1 is always a
predicate. Variable names:

* ``x_i_<label>``: node ``i`` carries ``<label>``; labels are ``p<q>`` for
  predicate family ``q`` of the grammar and ``top not and or imp F G U``.
* ``l_i_k`` / ``r_i_k``: node ``k`` is the left / right child of ``i``.
  Unary operators read their left child only.
* ``a_i``, ``b_i``: integer window bounds; ``c_i``: predicate threshold.

Interval mode adds reals ``ylo_z_i_j`` / ``yhi_z_i_j`` (worst / best
robustness of node ``i`` on entry ``z`` at position ``j``). Infinite values
are represented by ``±big``, a power of ten well above any finite value that
can occur. Point mode adds Booleans ``ys_z_i_j`` / ``yw_z_i_j`` (strong /
weak satisfaction) at positions ``0..T``, where position ``T`` stands for
every position past the end of the trajectory.

min/max are written with ``ite`` so everything stays in linear arithmetic.
Each admissible concrete window ``[A, B)`` is handled by its own guarded
implication over auxiliary sliding-window tables.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..grammar import PredicateGrammar, linear_range, threshold_domains
from ..model import IntervalTrajectory, Label, LabeledDataset, PointDataset, Trajectory
from .smtlib import real_literal

OPERATORS = ("top", "not", "and", "or", "imp", "F", "G", "U")
UNARY = ("not", "F", "G")
BINARY = ("and", "or", "imp", "U")


def family_labels(grammar: PredicateGrammar) -> list[str]:
    return [f"p{q}" for q in range(len(grammar.families))]


def node_labels(grammar: PredicateGrammar) -> list[str]:
    return family_labels(grammar) + list(OPERATORS)


def xv(i: int, lab: str) -> str:
    return f"x_{i}_{lab}"


def lv(i: int, k: int) -> str:
    return f"l_{i}_{k}"


def rv(i: int, k: int) -> str:
    return f"r_{i}_{k}"


def av(i: int) -> str:
    return f"a_{i}"


def bv(i: int) -> str:
    return f"b_{i}"


def cv(i: int) -> str:
    return f"c_{i}"


def yv(view: str, z: int, i: int, j: int) -> str:
    """Semantic variable; ``view`` is ``lo``/``hi`` (interval) or ``s``/``w`` (point)."""
    return f"y{view}_{z}_{i}_{j}"


@dataclass
class ConstraintSet:
    decls: list[tuple[str, str]] = field(default_factory=list)
    hard: list[str] = field(default_factory=list)
    soft: list[tuple[str, int]] = field(default_factory=list)

    def declare(self, name: str, sort: str):
        self.decls.append((name, sort))

    def add(self, term: str):
        self.hard.append(term)

    def extend(self, other: "ConstraintSet"):
        self.decls.extend(other.decls)
        self.hard.extend(other.hard)
        self.soft.extend(other.soft)
        return self

    def text(self) -> str:
        lines = [f"(declare-const {n} {s})" for n, s in self.decls]
        lines += [f"(assert {t})" for t in self.hard]
        lines += [f"(assert-soft {t} :weight {w})" for t, w in self.soft]
        return "\n".join(lines)


def _and(terms) -> str:
    terms = list(terms)
    if not terms:
        return "true"
    return terms[0] if len(terms) == 1 else f"(and {' '.join(terms)})"


def _or(terms) -> str:
    terms = list(terms)
    if not terms:
        return "false"
    return terms[0] if len(terms) == 1 else f"(or {' '.join(terms)})"


def _imp(guard: str, body: str) -> str:
    return f"(=> {guard} {body})"


def _exactly_one(vs: list[str]) -> list[str]:
    out = [_or(vs)]
    for p in range(len(vs)):
        for q in range(p + 1, len(vs)):
            out.append(f"(not (and {vs[p]} {vs[q]}))")
    return out


def _rmax(a: str, b: str) -> str:
    return f"(ite (>= {a} {b}) {a} {b})"


def _rmin(a: str, b: str) -> str:
    return f"(ite (<= {a} {b}) {a} {b})"


# -- structure -----------------------------------------------------------------

def build_structural(n: int, grammar: PredicateGrammar, horizon: int, domains=None) -> ConstraintSet:
    """Label/child uniqueness, node 1 atomic, ``0 <= a_i < b_i <= horizon``.

    With ``domains`` (one ``(lo, hi)`` per family) the threshold of a
    predicate node is also confined to its family's domain.
    """
    if n < 1:
        raise ValueError("formula size n must be at least 1")
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    cs = ConstraintSet()
    labels = node_labels(grammar)
    fams = family_labels(grammar)
    for i in range(1, n + 1):
        for lab in labels:
            cs.declare(xv(i, lab), "Bool")
        for k in range(1, i):
            cs.declare(lv(i, k), "Bool")
        for k in range(1, i):
            cs.declare(rv(i, k), "Bool")
        cs.declare(av(i), "Int")
        cs.declare(bv(i), "Int")
        cs.declare(cv(i), "Real")
    for i in range(1, n + 1):
        for t in _exactly_one([xv(i, lab) for lab in labels]):
            cs.add(t)
        if i >= 2:
            for t in _exactly_one([lv(i, k) for k in range(1, i)]):
                cs.add(t)
            for t in _exactly_one([rv(i, k) for k in range(1, i)]):
                cs.add(t)
        cs.add(f"(<= 0 {av(i)})")
        cs.add(f"(< {av(i)} {bv(i)})")
        cs.add(f"(<= {bv(i)} {horizon})")
        if domains is not None:
            for q, (lo, hi) in enumerate(domains):
                cs.add(_imp(xv(i, f"p{q}"), f"(and (<= {real_literal(lo)} {cv(i)}) (<= {cv(i)} {real_literal(hi)}))"))
    cs.add(_or([xv(1, p) for p in fams]))
    return cs


def _child_links(cs: ConstraintSet, i: int, z: int, positions: range, views: tuple[str, str]):
    """Aux ``L``/``R`` copies of the chosen children's values."""
    for side, pick in (("L", lv), ("R", rv)):
        for v in views:
            for j in positions:
                cs.declare(f"{side}{v}_{z}_{i}_{j}", "Bool" if v in ("s", "w") else "Real")
        for k in range(1, i):
            eqs = [f"(= {side}{v}_{z}_{i}_{j} {yv(v, z, k, j)})" for v in views for j in positions]
            cs.add(_imp(pick(i, k), _and(eqs)))


class _Tables:
    """Sliding-window aggregates of a node's child values over ``[s, s+w)``."""

    def __init__(self, cs: ConstraintSet, z: int, i: int, view: str, last: int, boolean: bool):
        self.cs, self.z, self.i, self.v, self.last = cs, z, i, view, last
        self.sort = "Bool" if boolean else "Real"
        self.boolean = boolean

    def L(self, s):
        return f"L{self.v}_{self.z}_{self.i}_{s}"

    def R(self, s):
        return f"R{self.v}_{self.z}_{self.i}_{s}"

    def _name(self, kind, s, w):
        return f"{kind}{self.v}_{self.z}_{self.i}_{s}_{w}"

    def build(self, kind: str, guard: str):
        """Define every cell; ``kind`` is MX (max of L), MN (min of L) or UV (until)."""
        body = []
        for s in range(self.last - 1, -1, -1):
            for w in range(2, self.last - s + 1):
                nm = self._name(kind, s, w)
                self.cs.declare(nm, self.sort)
                nxt = self.cell(kind, s + 1, w - 1)
                if kind == "MX":
                    rhs = f"(or {self.L(s)} {nxt})" if self.boolean else _rmax(self.L(s), nxt)
                elif kind == "MN":
                    rhs = f"(and {self.L(s)} {nxt})" if self.boolean else _rmin(self.L(s), nxt)
                else:
                    tmp = self._name("UT", s, w)
                    self.cs.declare(tmp, self.sort)
                    if self.boolean:
                        body.append(f"(= {tmp} (and {self.L(s)} {nxt}))")
                        rhs = f"(or {self.R(s)} {tmp})"
                    else:
                        body.append(f"(= {tmp} {_rmin(self.L(s), nxt)})")
                        rhs = _rmax(self.R(s), tmp)
                body.append(f"(= {nm} {rhs})")
        if body:
            self.cs.add(_imp(guard, _and(body)))

    def cell(self, kind: str, s: int, w: int) -> str:
        if w == 1:
            return self.R(s) if kind == "UV" else self.L(s)
        return self._name(kind, s, w)


def _temporal(cs, z, i, view, T, horizon, boolean, big_neg, big_pos, outputs=None):
    """Guarded F/G/U clauses for one view.

    Interval mode (``boolean=False``): positions ``0..T-1``, windows clipped,
    empty windows give ``big_neg`` (F, U) or ``big_pos`` (G). Point mode:
    positions ``0..T`` with position ``T`` absorbing everything past the end.
    ``outputs`` limits the positions whose node value is defined.
    """
    last = T + 1 if boolean else T
    outputs = range(last) if outputs is None else outputs
    tabs = _Tables(cs, z, i, view, last, boolean)
    kinds = {"F": "MX", "G": "MN", "U": "UV"}
    for lab, kind in kinds.items():
        tabs.build(kind, xv(i, lab))
        for A in range(horizon):
            for B in range(A + 1, horizon + 1):
                eqs = []
                for j in outputs:
                    s = j + A
                    e = min(j + B, last)
                    if boolean:
                        s = min(s, T)
                        e = min(j + B, T + 1)
                    y = yv(view, z, i, j)
                    if s >= e:
                        eqs.append(f"(= {y} {big_pos if lab == 'G' else big_neg})")
                    else:
                        eqs.append(f"(= {y} {tabs.cell(kind, s, e - s)})")
                guard = f"(and {xv(i, lab)} (= {av(i)} {A}) (= {bv(i)} {B}))"
                cs.add(_imp(guard, _and(eqs)))


def _outputs(i: int, n: int, positions: int) -> range:
    """Positions at which node ``i`` needs a value.

    Only the root's value at position 0 is ever read, so the root gets that
    single position; every other node may feed a temporal parent and keeps all.
    """
    return range(1) if i == n else range(positions)


def _box_linear(fam, itraj: IntervalTrajectory) -> tuple[np.ndarray, np.ndarray]:
    return linear_range(fam.coefficients, itraj.lower, itraj.upper)


def build_semantic_interval(
    n: int, itraj: IntervalTrajectory, grammar: PredicateGrammar, z: int = 0, horizon: int | None = None, big: float = 1e6
) -> ConstraintSet:
    """Worst/best robustness tracking for every node on one interval trajectory."""
    T = len(itraj)
    horizon = T if horizon is None else horizon
    if horizon != T:
        raise ValueError(f"horizon mismatch: encoding uses {horizon}, trajectory has length {T}")
    if itraj.dims != grammar.dims:
        raise ValueError("trajectory dimension differs from grammar")
    cs = ConstraintSet()
    pos, neg = real_literal(big), real_literal(-big)
    views = ("lo", "hi")
    lin = [_box_linear(f, itraj) for f in grammar.families]
    for i in range(1, n + 1):
        for v in views:
            for j in _outputs(i, n, T):
                cs.declare(yv(v, z, i, j), "Real")
    for i in range(1, n + 1):
        c = cv(i)
        out = _outputs(i, n, T)
        for q, fam in enumerate(grammar.families):
            lo_lin, hi_lin = lin[q]
            eqs = []
            for j in out:
                if fam.sense == ">":
                    wlo, whi = f"(- {real_literal(lo_lin[j])} {c})", f"(- {real_literal(hi_lin[j])} {c})"
                else:
                    wlo, whi = f"(- {c} {real_literal(hi_lin[j])})", f"(- {c} {real_literal(lo_lin[j])})"
                eqs.append(f"(= {yv('lo', z, i, j)} {wlo})")
                eqs.append(f"(= {yv('hi', z, i, j)} {whi})")
            cs.add(_imp(xv(i, f"p{q}"), _and(eqs)))
        cs.add(_imp(xv(i, "top"), _and(f"(= {yv(v, z, i, j)} {pos})" for v in views for j in out)))
        if i == 1:
            continue
        _child_links(cs, i, z, range(T), views)
        L = lambda v, j: f"L{v}_{z}_{i}_{j}"  # noqa: E731
        R = lambda v, j: f"R{v}_{z}_{i}_{j}"  # noqa: E731
        body = {"not": [], "and": [], "or": [], "imp": []}
        for j in out:
            ylo, yhi = yv("lo", z, i, j), yv("hi", z, i, j)
            body["not"] += [f"(= {ylo} (- {L('hi', j)}))", f"(= {yhi} (- {L('lo', j)}))"]
            for v, y in (("lo", ylo), ("hi", yhi)):
                body["and"].append(f"(= {y} {_rmin(L(v, j), R(v, j))})")
                body["or"].append(f"(= {y} {_rmax(L(v, j), R(v, j))})")
            body["imp"].append(f"(= {ylo} {_rmax('(- ' + L('hi', j) + ')', R('lo', j))})")
            body["imp"].append(f"(= {yhi} {_rmax('(- ' + L('lo', j) + ')', R('hi', j))})")
        for lab, eqs in body.items():
            cs.add(_imp(xv(i, lab), _and(eqs)))
        for v in views:
            _temporal(cs, z, i, v, T, horizon, False, neg, pos, out)
    return cs


def build_semantic_point(
    n: int, traj: Trajectory, grammar: PredicateGrammar, z: int = 0, horizon: int | None = None
) -> ConstraintSet:
    """Strong/weak Boolean tracking for every node on one point trajectory."""
    T = len(traj)
    horizon = T if horizon is None else horizon
    if horizon != T:
        raise ValueError(f"horizon mismatch: encoding uses {horizon}, trajectory has length {T}")
    if traj.dims != grammar.dims:
        raise ValueError("trajectory dimension differs from grammar")
    cs = ConstraintSet()
    views = ("s", "w")
    P = range(T + 1)
    for i in range(1, n + 1):
        for v in views:
            for j in _outputs(i, n, T + 1):
                cs.declare(yv(v, z, i, j), "Bool")
    for i in range(1, n + 1):
        c = cv(i)
        out = _outputs(i, n, T + 1)
        for q, fam in enumerate(grammar.families):
            lin, _ = linear_range(fam.coefficients, traj.values, traj.values)
            eqs = []
            for j in out:
                if j == T:
                    eqs.append(f"(not {yv('s', z, i, T)})")
                    eqs.append(yv("w", z, i, T))
                    continue
                holds = f"(< {c} {real_literal(lin[j])})" if fam.sense == ">" else f"(< {real_literal(lin[j])} {c})"
                eqs.append(f"(= {yv('s', z, i, j)} {holds})")
                eqs.append(f"(= {yv('w', z, i, j)} {holds})")
            cs.add(_imp(xv(i, f"p{q}"), _and(eqs)))
        cs.add(_imp(xv(i, "top"), _and(yv(v, z, i, j) for v in views for j in out)))
        if i == 1:
            continue
        _child_links(cs, i, z, P, views)
        L = lambda v, j: f"L{v}_{z}_{i}_{j}"  # noqa: E731
        R = lambda v, j: f"R{v}_{z}_{i}_{j}"  # noqa: E731
        body = {"not": [], "and": [], "or": [], "imp": []}
        for j in out:
            ys, yw = yv("s", z, i, j), yv("w", z, i, j)
            body["not"] += [f"(= {ys} (not {L('w', j)}))", f"(= {yw} (not {L('s', j)}))"]
            for v, y in (("s", ys), ("w", yw)):
                body["and"].append(f"(= {y} (and {L(v, j)} {R(v, j)}))")
                body["or"].append(f"(= {y} (or {L(v, j)} {R(v, j)}))")
            body["imp"].append(f"(= {ys} (or (not {L('w', j)}) {R('s', j)}))")
            body["imp"].append(f"(= {yw} (or (not {L('s', j)}) {R('w', j)}))")
        for lab, eqs in body.items():
            cs.add(_imp(xv(i, lab), _and(eqs)))
        for v in views:
            _temporal(cs, z, i, v, T, horizon, True, "false", "true", out)
    return cs


def objective_term(n: int, z: int, label) -> str:
    return yv("lo", z, n, 0) if Label.of(label) == Label.POS else f"(- {yv('hi', z, n, 0)})"


def build_objective_Y(data: LabeledDataset, n: int, name: str = "Y") -> ConstraintSet:
    """``Y = min_z (+ylo_z_root_0 for +1, -yhi_z_root_0 for -1)``."""
    if not data:
        raise ValueError("objective of an empty dataset")
    cs = ConstraintSet()
    cs.declare(name, "Real")
    terms = [objective_term(n, z, lab) for z, (_, lab) in enumerate(data)]
    for t in terms:
        cs.add(f"(<= {name} {t})")
    cs.add(_or(f"(= {name} {t})" for t in terms))
    return cs


def build_consistency(data: PointDataset, n: int, grammar: PredicateGrammar) -> tuple[ConstraintSet, list[tuple[str, int]]]:
    """Semantic tracking for every sample plus one weight-1 soft goal per sample."""
    if not data:
        raise ValueError("consistency constraints for an empty dataset")
    hard = ConstraintSet()
    soft = []
    for z, (traj, lab) in enumerate(data):
        hard.extend(build_semantic_point(n, traj, grammar, z))
        root = yv("s", z, n, 0)
        soft.append((root if lab == Label.POS else f"(not {root})", 1))
    return hard, soft


def big_m(data, domains) -> float:
    """A power of ten far above every finite robustness value of the encoding."""
    if isinstance(data, LabeledDataset):
        m = max(float(np.abs(data.lower).max()), float(np.abs(data.upper).max()))
    else:
        m = float(np.abs(data.values).max())
    # affine families can add up to dims terms
    m = m * data.dims + max((max(abs(lo), abs(hi)) for lo, hi in domains), default=0.0)
    return float(10 ** (math.ceil(math.log10(max(m, 1.0))) + 3))


@dataclass
class Encoding:
    """A complete problem: structure + semantics + objective or soft goals.

    The constraint text is only generated when first requested, so backends
    that work on ``data`` directly never pay for it.
    """

    n: int
    grammar: PredicateGrammar
    horizon: int
    domains: list
    mode: str  # "interval" or "point"
    data: object
    objective: str | None = None
    big: float = math.inf
    soft: bool = True
    _constraints: ConstraintSet | None = field(default=None, repr=False)

    @property
    def entries(self) -> int:
        return len(self.data)

    @property
    def constraints(self) -> ConstraintSet:
        if self._constraints is None:
            self._constraints = self._build()
        return self._constraints

    def _build(self) -> ConstraintSet:
        cs = build_structural(self.n, self.grammar, self.horizon, self.domains)
        if self.mode == "interval":
            for z, (itraj, _) in enumerate(self.data):
                cs.extend(build_semantic_interval(self.n, itraj, self.grammar, z, self.horizon, self.big))
            cs.extend(build_objective_Y(self.data, self.n, self.objective))
        else:
            hard, goals = build_consistency(self.data, self.n, self.grammar)
            cs.extend(hard)
            if self.soft:
                cs.soft.extend(goals)
            else:
                for t, _ in goals:
                    cs.add(t)
        return cs

    def structural_names(self) -> list[str]:
        out = []
        for i in range(1, self.n + 1):
            out += [xv(i, lab) for lab in node_labels(self.grammar)]
            out += [lv(i, k) for k in range(1, i)] + [rv(i, k) for k in range(1, i)]
            out += [av(i), bv(i), cv(i)]
        return out

    def value_names(self) -> list[str]:
        """Variables read back from a solver model."""
        out = self.structural_names()
        if self.mode == "interval":
            for z in range(self.entries):
                out += [yv("lo", z, self.n, 0), yv("hi", z, self.n, 0)]
            out.append(self.objective)
        else:
            out += [yv("s", z, self.n, 0) for z in range(self.entries)]
        return out

    def script(self, timeout_ms: int | None = None, commands: bool = True) -> str:
        """SMT-LIB text; identical encodings give byte-identical scripts."""
        parts = ["(set-option :produce-models true)"]
        if timeout_ms is not None:
            parts.append(f"(set-option :timeout {int(timeout_ms)})")
        parts.append(self.constraints.text())
        if commands:
            if self.objective:
                parts.append(f"(maximize {self.objective})")
            parts.append("(check-sat)")
            parts.append(f"(get-value ({' '.join(self.value_names())}))")
        return "\n".join(parts) + "\n"


def encode_interval(data: LabeledDataset, n: int, grammar: PredicateGrammar, domains=None) -> Encoding:
    """``Φ^DAG_n`` + interval semantics for every entry + objective ``Y``."""
    if not data:
        raise ValueError("cannot encode an empty dataset")
    if n < 1:
        raise ValueError("formula size n must be at least 1")
    domains = threshold_domains(grammar, data) if domains is None else domains
    return Encoding(n, grammar, data.length, domains, "interval", data, "Y", big_m(data, domains))


def encode_point(data: PointDataset, n: int, grammar: PredicateGrammar, domains=None, soft: bool = True) -> Encoding:
    """``Φ^DAG_n`` + point semantics; soft goals, or hard ones when ``soft`` is False."""
    if not data:
        raise ValueError("cannot encode an empty dataset")
    if n < 1:
        raise ValueError("formula size n must be at least 1")
    domains = threshold_domains(grammar, data) if domains is None else domains
    return Encoding(n, grammar, data.length, domains, "point", data, soft=soft)
