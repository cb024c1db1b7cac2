"""Separability of interval trajectories and the classifier it guarantees."""
from __future__ import annotations

from ..formula import Eventually, Formula, Predicate, TimeWindow, conjunction, disjunction
from ..model import IntervalTrajectory, Label, LabeledDataset


class NotSeparable(ValueError):
    pass


def _check_shapes(a: IntervalTrajectory, b: IntervalTrajectory):
    if a.lower.shape != b.lower.shape:
        raise ValueError(f"shape mismatch {a.lower.shape} vs {b.lower.shape}")


def check_separable(a: IntervalTrajectory, b: IntervalTrajectory) -> tuple[int, int] | None:
    """First ``(j, k)`` at which the intervals are disjoint, or None.

    Timesteps ``j`` are 0-based, dimensions ``k`` 1-based (as in ``x^k``).
    Intervals are closed, so touching endpoints intersect.
    """
    _check_shapes(a, b)
    T, n = a.lower.shape
    for j in range(T):
        for k in range(n):
            if a.upper[j, k] < b.lower[j, k] or b.upper[j, k] < a.lower[j, k]:
                return j, k + 1
    return None


def widest_gap(a: IntervalTrajectory, b: IntervalTrajectory) -> tuple[int, int, float, float] | None:
    """``(j, k, gap, delta)`` maximizing the gap; ``gap > 0`` means ``a`` lies above.

    ``delta`` is the midpoint of the gap. Ties go to the first in (j, k) order.
    """
    _check_shapes(a, b)
    above = a.lower - b.upper
    below = b.lower - a.upper
    best = None
    T, n = a.lower.shape
    for j in range(T):
        for k in range(n):
            for gap, sign in ((above[j, k], 1), (below[j, k], -1)):
                if gap > 0 and (best is None or gap > abs(best[2])):
                    lo, hi = (b.upper[j, k], a.lower[j, k]) if sign > 0 else (a.upper[j, k], b.lower[j, k])
                    best = (j, k + 1, sign * float(gap), (float(lo) + float(hi)) / 2)
    return best


def cross_pairs(data: LabeledDataset):
    pos = [t for t, lab in data if lab == Label.POS]
    neg = [t for t, lab in data if lab == Label.NEG]
    for a in pos:
        for b in neg:
            yield a, b


def dataset_separable(data: LabeledDataset) -> bool:
    """Every (+1, -1) pair of entries is separable."""
    return all(check_separable(a, b) is not None for a, b in cross_pairs(data))


def pair_classifier(a: IntervalTrajectory, b: IntervalTrajectory) -> Formula:
    """``F[j,j+1)(x^k > δ)`` or ``F[j,j+1)(x^k < δ)``, true on ``a`` and false on ``b``."""
    w = widest_gap(a, b)
    if w is None:
        raise NotSeparable("pair of interval trajectories intersects at every timestep and dimension")
    j, k, gap, delta = w
    coeffs = tuple(1.0 if d == k - 1 else 0.0 for d in range(a.dims))
    return Eventually(TimeWindow(j, j + 1), Predicate(coeffs, delta, ">" if gap > 0 else "<"))


def constructive_classifier(data: LabeledDataset) -> Formula:
    """Disjunction over +1 entries of the conjunction over -1 entries of pair classifiers.

    On a separable dataset the worst-case margin of the result is positive
    on every entry.
    """
    if not data:
        raise ValueError("empty dataset")
    pos = [t for t, lab in data if lab == Label.POS]
    neg = [t for t, lab in data if lab == Label.NEG]
    for a in pos:
        for b in neg:
            if check_separable(a, b) is None:
                raise NotSeparable("dataset has a (+1, -1) pair that intersects everywhere")
    return disjunction([conjunction([pair_classifier(a, b) for b in neg]) for a in pos])
