"""Point samples drawn from interval trajectories (input of the baselines)."""
from __future__ import annotations

import numpy as np

from ..model import IntervalTrajectory, LabeledDataset, PointDataset, Trajectory


def _draw(rng: np.random.Generator, itraj: IntervalTrajectory, k: int) -> np.ndarray:
    lo, hi = itraj.lower, itraj.upper
    # uniform(lo, hi) may round onto hi for wide boxes, never outside
    return np.clip(rng.uniform(lo, hi, size=(k,) + lo.shape), lo, hi)


def sample_trajectories(itraj: IntervalTrajectory, k: int, seed: int | None = 0) -> list[Trajectory]:
    """``k`` members of ``itraj``, each coordinate uniform in its interval."""
    if k < 1:
        raise ValueError("need at least one sample")
    return [Trajectory(v) for v in _draw(np.random.default_rng(seed), itraj, k)]


def sample_dataset(data: LabeledDataset, k: int, seed: int | None = 0) -> PointDataset:
    """Replace every interval trajectory by ``k`` labeled samples of it."""
    if k < 1:
        raise ValueError("need at least one sample")
    rng = np.random.default_rng(seed)
    items = []
    for itraj, label in data:
        items.extend((Trajectory(v), label) for v in _draw(rng, itraj, k))
    return PointDataset(items, dims=data.dims, length=data.length)
