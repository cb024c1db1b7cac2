"""STL formula syntax DAGs.

Nodes are immutable dataclasses. Structural equality comes from the dataclass
``__eq__``; sharing is by object identity, so a DAG is obtained simply by
reusing the same node object under several parents. ``formula_size`` counts
distinct node objects.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

# Binding strength, loosest first. Used by the printer and parser.
PREC_IMPLIES, PREC_OR, PREC_AND, PREC_UNTIL, PREC_UNARY, PREC_ATOM = range(6)


@dataclass(frozen=True)
class TimeWindow:
    """Discrete window ``[a, b)`` of timestep offsets."""

    a: int
    b: int

    def __post_init__(self):
        if not (isinstance(self.a, int) and isinstance(self.b, int)):
            raise TypeError("window bounds must be integers")
        if not 0 <= self.a < self.b:
            raise ValueError(f"invalid window [{self.a},{self.b}): need 0 <= a < b")

    def __str__(self) -> str:
        return f"[{self.a},{self.b})"


def affine(coefficients, x) -> float:
    """``sum_k coefficients[k] * x[k]`` in a fixed left-to-right order.

    Every evaluator in the package goes through this function (or an
    elementwise replica with the same operation order) so that corner
    evaluations agree bit for bit.
    """
    s = 0.0
    for w, v in zip(coefficients, x):
        if w:
            s += w * float(v)
    return s


class Formula:
    """Base class for syntax DAG nodes."""

    precedence = PREC_ATOM

    @property
    def children(self) -> tuple["Formula", ...]:
        return ()

    def __invert__(self) -> "Formula":
        return Not(self)

    def __and__(self, other: "Formula") -> "Formula":
        return And(self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return Or(self, other)

    def implies(self, other: "Formula") -> "Formula":
        return Implies(self, other)

    def __str__(self) -> str:
        return print_formula(self)


@dataclass(frozen=True, repr=False)
class Top(Formula):
    def __repr__(self):
        return "Top()"


@dataclass(frozen=True, repr=False)
class Predicate(Formula):
    """Affine atom, always read as ``f(x) > 0``.

    ``f(x) = w.x - threshold`` for sense ``'>'`` and ``threshold - w.x`` for ``'<'``.
    """

    coefficients: tuple
    threshold: float
    sense: str = ">"

    def __post_init__(self):
        coeffs = tuple(float(w) for w in self.coefficients)
        if not coeffs or not any(coeffs):
            raise ValueError("predicate needs at least one nonzero coefficient")
        if self.sense not in (">", "<"):
            raise ValueError(f"sense must be '>' or '<', got {self.sense!r}")
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "threshold", float(self.threshold))

    @classmethod
    def on(cls, dim: int, threshold: float, sense: str = ">", dims: int = 1) -> "Predicate":
        """``x<dim> sense threshold`` with 1-based ``dim``."""
        w = [0.0] * max(dims, dim)
        w[dim - 1] = 1.0
        return cls(tuple(w), threshold, sense)

    @property
    def dims(self) -> int:
        return len(self.coefficients)

    def value(self, x) -> float:
        lin = affine(self.coefficients, x)
        return lin - self.threshold if self.sense == ">" else self.threshold - lin

    def corner(self, lower, upper, worst: bool = True) -> list[float]:
        """Box corner minimizing (``worst``) or maximizing ``f`` over ``[lower, upper]``."""
        # f increases with w.x for '>', decreases for '<'
        want_low_lin = worst == (self.sense == ">")
        out = []
        for w, lo, hi in zip(self.coefficients, lower, upper):
            lo, hi = float(lo), float(hi)
            if w > 0:
                out.append(lo if want_low_lin else hi)
            elif w < 0:
                out.append(hi if want_low_lin else lo)
            else:
                out.append(lo)
        return out

    def with_threshold(self, threshold: float) -> "Predicate":
        return Predicate(self.coefficients, threshold, self.sense)

    def __repr__(self):
        return f"Predicate({_format_predicate(self)!r})"


@dataclass(frozen=True, repr=False)
class Not(Formula):
    child: Formula
    precedence = PREC_UNARY

    @property
    def children(self):
        return (self.child,)

    def __repr__(self):
        return f"Not({self.child!r})"


@dataclass(frozen=True, repr=False)
class And(Formula):
    left: Formula
    right: Formula
    precedence = PREC_AND

    @property
    def children(self):
        return (self.left, self.right)

    def __repr__(self):
        return f"And({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Or(Formula):
    left: Formula
    right: Formula
    precedence = PREC_OR

    @property
    def children(self):
        return (self.left, self.right)

    def __repr__(self):
        return f"Or({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Implies(Formula):
    left: Formula
    right: Formula
    precedence = PREC_IMPLIES

    @property
    def children(self):
        return (self.left, self.right)

    def __repr__(self):
        return f"Implies({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Eventually(Formula):
    window: TimeWindow
    child: Formula
    precedence = PREC_UNARY

    @property
    def children(self):
        return (self.child,)

    def __repr__(self):
        return f"Eventually({self.window}, {self.child!r})"


@dataclass(frozen=True, repr=False)
class Always(Formula):
    window: TimeWindow
    child: Formula
    precedence = PREC_UNARY

    @property
    def children(self):
        return (self.child,)

    def __repr__(self):
        return f"Always({self.window}, {self.child!r})"


@dataclass(frozen=True, repr=False)
class Until(Formula):
    window: TimeWindow
    left: Formula
    right: Formula
    precedence = PREC_UNTIL

    @property
    def children(self):
        return (self.left, self.right)

    def __repr__(self):
        return f"Until({self.window}, {self.left!r}, {self.right!r})"


TEMPORAL = (Eventually, Always, Until)


def bottom() -> Formula:
    """The constant false, written as the negation of true."""
    return Not(Top())


# -- traversal ---------------------------------------------------------------

def nodes(phi: Formula) -> list[Formula]:
    """Distinct DAG nodes in post-order (children before parents)."""
    seen: set[int] = set()
    out: list[Formula] = []
    stack: list[tuple[Formula, bool]] = [(phi, False)]
    while stack:
        node, expanded = stack.pop()
        if id(node) in seen:
            continue
        if expanded:
            seen.add(id(node))
            out.append(node)
        else:
            stack.append((node, True))
            for child in reversed(node.children):
                if id(child) not in seen:
                    stack.append((child, False))
    return out


def formula_size(phi: Formula) -> int:
    """Number of DAG nodes; shared subformulas count once."""
    return len(nodes(phi))


def tree_size(phi: Formula) -> int:
    """Node count of the formula unfolded into a tree."""
    return 1 + sum(tree_size(c) for c in phi.children)


def predicates(phi: Formula) -> list[Predicate]:
    return [n for n in nodes(phi) if isinstance(n, Predicate)]


def formula_dims(phi: Formula) -> int | None:
    dims = {p.dims for p in predicates(phi)}
    if len(dims) > 1:
        raise ValueError(f"predicates disagree on dimension: {sorted(dims)}")
    return dims.pop() if dims else None


def lookahead(phi: Formula) -> int:
    """Largest timestep offset the formula can inspect relative to its start."""
    memo: dict[int, int] = {}
    for node in nodes(phi):
        kids = [memo[id(c)] for c in node.children]
        extra = node.window.b - 1 if isinstance(node, TEMPORAL) else 0
        memo[id(node)] = extra + max(kids, default=0)
    return memo[id(phi)]


def within_horizon(phi: Formula, length: int, j: int = 0) -> bool:
    """True if evaluating at ``j`` never looks past the last index (no clipping)."""
    return j + lookahead(phi) < length


def dimension_polarities(phi: Formula) -> dict[int, set[int]]:
    """Signs (+1/-1) with which each 0-based signal dimension drives the formula.

    A dimension is positive where increasing it can only increase robustness.
    Negation and the left operand of an implication flip the sign.
    """
    out: dict[int, set[int]] = {}
    seen: set[tuple[int, int]] = set()
    stack = [(phi, 1)]
    while stack:
        node, parity = stack.pop()
        if (id(node), parity) in seen:
            continue
        seen.add((id(node), parity))
        if isinstance(node, Predicate):
            s = parity if node.sense == ">" else -parity
            for k, w in enumerate(node.coefficients):
                if w:
                    out.setdefault(k, set()).add(s if w > 0 else -s)
        elif isinstance(node, Not):
            stack.append((node.child, -parity))
        elif isinstance(node, Implies):
            stack.append((node.left, -parity))
            stack.append((node.right, parity))
        else:
            stack.extend((c, parity) for c in node.children)
    return out


def mixed_polarity_dimensions(phi: Formula) -> list[int]:
    """0-based dimensions that occur with both signs."""
    return sorted(k for k, signs in dimension_polarities(phi).items() if len(signs) > 1)


def share_subformulas(phi: Formula, select: Callable[[Formula], bool] | None = None) -> Formula:
    """Merge structurally equal subformulas into single shared nodes.

    With ``select`` only nodes for which it returns True are merged.
    """
    canon: dict[Formula, Formula] = {}
    rebuilt: dict[int, Formula] = {}
    for node in nodes(phi):
        kids = tuple(rebuilt[id(c)] for c in node.children)
        new = _rebuild(node, kids)
        if select is None or select(new):
            new = canon.setdefault(new, new)
        rebuilt[id(node)] = new
    return rebuilt[id(phi)]


def _rebuild(node: Formula, kids: tuple) -> Formula:
    if not kids:
        return node
    if all(a is b for a, b in zip(kids, node.children)):
        return node
    if isinstance(node, Not):
        return Not(kids[0])
    if isinstance(node, (Eventually, Always)):
        return type(node)(node.window, kids[0])
    if isinstance(node, Until):
        return Until(node.window, kids[0], kids[1])
    return type(node)(kids[0], kids[1])


def conjunction(parts: list[Formula]) -> Formula:
    if not parts:
        return Top()
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disjunction(parts: list[Formula]) -> Formula:
    if not parts:
        return bottom()
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


# -- printing ----------------------------------------------------------------

def _fmt_number(x: float) -> str:
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(float(x))


def _format_predicate(p: Predicate) -> str:
    terms = []
    for k, w in enumerate(p.coefficients):
        if not w:
            continue
        mag = abs(w)
        body = f"x{k + 1}" if mag == 1 else f"{_fmt_number(mag)}*x{k + 1}"
        if not terms:
            terms.append(body if w > 0 else f"-{body}")
        else:
            terms.append(f"{'+' if w > 0 else '-'} {body}")
    return f"{' '.join(terms)} {p.sense} {_fmt_number(p.threshold)}"


def print_formula(phi: Formula) -> str:
    """ASCII rendering accepted by :func:`uastl.parser.parse_formula`.

    Shared nodes are printed once per occurrence.
    """
    return _pp(phi, PREC_IMPLIES)


def _pp(node: Formula, min_prec: int) -> str:
    text = _pp_raw(node)
    return f"({text})" if node.precedence < min_prec else text


def _operand(node: Formula) -> str:
    # predicates get parentheses after prefix operators for readability
    if isinstance(node, Predicate):
        return f"({_format_predicate(node)})"
    return _pp(node, PREC_UNARY)


def _pp_raw(node: Formula) -> str:
    if isinstance(node, Top):
        return "T"
    if isinstance(node, Predicate):
        return _format_predicate(node)
    if isinstance(node, Not):
        return "!" + _operand(node.child)
    if isinstance(node, Eventually):
        return f"F{node.window}" + _operand(node.child)
    if isinstance(node, Always):
        return f"G{node.window}" + _operand(node.child)
    if isinstance(node, Until):
        return f"{_pp(node.left, PREC_UNTIL)} U{node.window} {_pp(node.right, PREC_UNTIL + 1)}"
    if isinstance(node, And):
        return f"{_pp(node.left, PREC_AND)} & {_pp(node.right, PREC_AND + 1)}"
    if isinstance(node, Or):
        return f"{_pp(node.left, PREC_OR)} | {_pp(node.right, PREC_OR + 1)}"
    if isinstance(node, Implies):
        # right associative
        return f"{_pp(node.left, PREC_IMPLIES + 1)} -> {_pp(node.right, PREC_IMPLIES)}"
    raise TypeError(f"unknown node {node!r}")
