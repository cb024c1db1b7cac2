"""Predicate grammars: which affine atoms an inference run may use."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .formula import Predicate
from .model import LabeledDataset, PointDataset


@dataclass(frozen=True)
class PredicateFamily:
    """An atom with a free threshold: ``w.x > c`` or ``w.x < c``."""

    coefficients: tuple
    sense: str = ">"

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(float(w) for w in self.coefficients))
        if not any(self.coefficients):
            raise ValueError("family needs a nonzero coefficient")
        if self.sense not in (">", "<"):
            raise ValueError(f"bad sense {self.sense!r}")

    def instantiate(self, threshold: float) -> Predicate:
        return Predicate(self.coefficients, threshold, self.sense)

    def __str__(self) -> str:
        return str(self.instantiate(0.0)).rsplit(" ", 1)[0] + " c"


@dataclass(frozen=True)
class PredicateGrammar:
    """Finite set of predicate families over ``dims`` signal dimensions.

    ``bounds`` optionally fixes the threshold domain ``(lo, hi)`` for every
    family; otherwise domains are derived from data (see
    :func:`threshold_domains`).
    """

    dims: int
    families: tuple[PredicateFamily, ...]
    bounds: tuple[float, float] | None = None
    margin: float = field(default=1.0)

    def __post_init__(self):
        fams = tuple(self.families)
        if not fams:
            raise ValueError("grammar needs at least one predicate family")
        if len(set(fams)) != len(fams):
            raise ValueError("duplicate predicate families")
        for f in fams:
            if len(f.coefficients) != self.dims:
                raise ValueError(f"family {f} has {len(f.coefficients)} coefficients, grammar dims={self.dims}")
        object.__setattr__(self, "families", fams)
        if self.bounds is not None and not self.bounds[0] <= self.bounds[1]:
            raise ValueError("threshold bounds must satisfy lo <= hi")

    def family_index(self, pred: Predicate) -> int:
        fam = PredicateFamily(pred.coefficients, pred.sense)
        try:
            return self.families.index(fam)
        except ValueError:
            raise GrammarError(f"predicate '{pred}' is not in the grammar") from None

    def admits(self, pred: Predicate) -> bool:
        return PredicateFamily(pred.coefficients, pred.sense) in self.families


class GrammarError(ValueError):
    pass


def _unit(dims: int, k: int, sign: float = 1.0) -> tuple:
    w = [0.0] * dims
    w[k] = sign
    return tuple(w)


def default_grammar(dims: int, senses=(">", "<"), pairs: bool = True, **kwargs) -> PredicateGrammar:
    """``x^k ⋈ c`` for every dimension plus ``x^k ± x^m ⋈ c`` for every pair."""
    vectors = [_unit(dims, k) for k in range(dims)]
    if pairs:
        for k, m in itertools.combinations(range(dims), 2):
            w = [0.0] * dims
            w[k], w[m] = 1.0, 1.0
            vectors.append(tuple(w))
            w = list(w)
            w[m] = -1.0
            vectors.append(tuple(w))
    fams = tuple(PredicateFamily(v, s) for v in vectors for s in senses)
    return PredicateGrammar(dims, fams, **kwargs)


def single_predicate_grammar(dims: int, dim: int = 1, sense: str = ">", **kwargs) -> PredicateGrammar:
    """Grammar with the single family ``x^dim sense c`` (``dim`` is 1-based)."""
    return PredicateGrammar(dims, (PredicateFamily(_unit(dims, dim - 1), sense),), **kwargs)


def linear_range(coefficients, lower: np.ndarray, upper: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Elementwise min and max of ``w.x`` over boxes ``[lower, upper]`` (last axis = dims)."""
    lo = np.zeros(lower.shape[:-1])
    hi = np.zeros(lower.shape[:-1])
    for k, w in enumerate(coefficients):
        if not w:
            continue
        a, b = w * lower[..., k], w * upper[..., k]
        if w > 0:
            lo = lo + a
            hi = hi + b
        else:
            lo = lo + b
            hi = hi + a
    return lo, hi


def threshold_domains(grammar: PredicateGrammar, data) -> list[tuple[float, float]]:
    """Bounded threshold domain per family.

    Defaults to ``[min - margin, max + margin]`` of ``w.x`` over every box
    endpoint (or sample) in ``data``.
    """
    if grammar.bounds is not None:
        return [tuple(map(float, grammar.bounds))] * len(grammar.families)
    if isinstance(data, LabeledDataset):
        lower, upper = data.lower, data.upper
    elif isinstance(data, PointDataset):
        lower = upper = data.values
    else:
        raise TypeError(f"cannot derive threshold domain from {type(data).__name__}")
    out = []
    for fam in grammar.families:
        lo, hi = linear_range(fam.coefficients, lower, upper)
        a = float(lo.min()) - grammar.margin
        b = float(hi.max()) + grammar.margin
        out.append((float(a), float(b)))
    return out
