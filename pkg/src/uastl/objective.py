"""Worst-case classification objectives and dataset splits."""
from __future__ import annotations

import math

from .formula import Formula
from .model import IntervalTrajectory, Label, LabeledDataset, PointDataset
from .semantics import eval_strong, interval_robustness_pair


def objective_single(itraj: IntervalTrajectory, label, phi: Formula) -> float:
    """``r̲(ζ̂, φ, t0)`` for a +1 entry, ``r̲(ζ̂, ¬φ, t0) = -r̄(ζ̂, φ, t0)`` for a -1 entry."""
    lo, hi = interval_robustness_pair(itraj, phi, 0)
    return lo if Label.of(label) == Label.POS else -hi


def objective_entries(data: LabeledDataset, phi: Formula) -> list[float]:
    return [objective_single(t, lab, phi) for t, lab in data]


def objective_dataset(data: LabeledDataset, phi: Formula) -> float:
    """``F(D, φ)``: the smallest per-entry worst-case margin."""
    if not data:
        raise ValueError("objective of an empty dataset")
    return min(objective_entries(data, phi))


def averaged_margin(lo: float, hi: float) -> float:
    """``(r̲ + r̄) / 2``, the quantity the interval split compares with zero."""
    if math.isinf(lo) and math.isinf(hi):
        # +inf + -inf: treat as a zero mean, which falls on the reject side
        return 0.0 if lo != hi else lo
    return (lo + hi) / 2


def split_interval(data: LabeledDataset, phi: Formula) -> tuple[LabeledDataset, LabeledDataset]:
    """Entries whose averaged margin ``(r̲ + r̄)/2`` is strictly positive, and the rest."""
    acc, rej = [], []
    for i, (t, _) in enumerate(data):
        lo, hi = interval_robustness_pair(t, phi, 0)
        (acc if averaged_margin(lo, hi) > 0 else rej).append(i)
    return data.subset(acc), data.subset(rej)


def split_point(data: PointDataset, phi: Formula) -> tuple[PointDataset, PointDataset]:
    """Entries strongly satisfying ``phi`` at t0, and the rest."""
    acc, rej = [], []
    for i, (t, _) in enumerate(data):
        (acc if eval_strong(t, phi, 0) else rej).append(i)
    return data.subset(acc), data.subset(rej)
