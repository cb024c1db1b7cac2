"""Trajectories, interval trajectories and labeled datasets.

Timesteps are plain indices ``0..J``; physical sample times are never stored.
Arrays are float64 with shape ``(length, dims)`` and are made read-only on
construction so that instances can be shared freely.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np


class Label(enum.IntEnum):
    """+1 marks desired behavior, -1 undesired."""

    POS = 1
    NEG = -1

    @classmethod
    def of(cls, value) -> "Label":
        if isinstance(value, Label):
            return value
        if value in (1, "1", "+1", True):
            return cls.POS
        if value in (-1, "-1"):
            return cls.NEG
        raise ValueError(f"label must be +1 or -1, got {value!r}")


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def intersects(self, other: "Interval") -> bool:
        # closed intervals: touching endpoints intersect
        return self.lo <= other.hi and other.lo <= self.hi

    @property
    def width(self) -> float:
        return self.hi - self.lo


def _readonly(values, name: str) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ValueError(f"{name} must be a nonempty (length, dims) array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    arr.setflags(write=False)
    return arr


class Trajectory:
    """A finite discrete-time signal ``values[j, k]`` = dimension k at step j."""

    __slots__ = ("values",)

    def __init__(self, values):
        self.values = _readonly(values, "values")

    def __len__(self) -> int:
        return self.values.shape[0]

    @property
    def dims(self) -> int:
        return self.values.shape[1]

    def __getitem__(self, j: int) -> np.ndarray:
        return self.values[j]

    def __eq__(self, other) -> bool:
        return isinstance(other, Trajectory) and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash(self.values.tobytes())

    def __repr__(self) -> str:
        return f"Trajectory({self.values.tolist()})"


class IntervalTrajectory:
    """Per-timestep axis-aligned boxes; the set of all trajectories inside them."""

    __slots__ = ("lower", "upper")

    def __init__(self, lower, upper):
        lower = _readonly(lower, "lower")
        upper = _readonly(upper, "upper")
        if lower.shape != upper.shape:
            raise ValueError(f"lower/upper shape mismatch {lower.shape} vs {upper.shape}")
        if np.any(lower > upper):
            raise ValueError("lower bound exceeds upper bound")
        self.lower = lower
        self.upper = upper

    @classmethod
    def from_boxes(cls, boxes: Sequence[Sequence[Interval]]) -> "IntervalTrajectory":
        lower = [[iv.lo for iv in step] for step in boxes]
        upper = [[iv.hi for iv in step] for step in boxes]
        return cls(lower, upper)

    @classmethod
    def point(cls, traj: Trajectory) -> "IntervalTrajectory":
        """The degenerate interval trajectory whose only member is ``traj``."""
        return cls(traj.values, traj.values)

    def __len__(self) -> int:
        return self.lower.shape[0]

    @property
    def dims(self) -> int:
        return self.lower.shape[1]

    def __getitem__(self, j: int) -> tuple[Interval, ...]:
        return tuple(Interval(float(lo), float(hi)) for lo, hi in zip(self.lower[j], self.upper[j]))

    @property
    def boxes(self) -> tuple[tuple[Interval, ...], ...]:
        return tuple(self[j] for j in range(len(self)))

    def contains(self, traj: Trajectory) -> bool:
        if traj.values.shape != self.lower.shape:
            return False
        return bool(np.all(self.lower <= traj.values) and np.all(traj.values <= self.upper))

    @property
    def is_degenerate(self) -> bool:
        return bool(np.array_equal(self.lower, self.upper))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, IntervalTrajectory)
            and np.array_equal(self.lower, other.lower)
            and np.array_equal(self.upper, other.upper)
        )

    def __hash__(self):
        return hash((self.lower.tobytes(), self.upper.tobytes()))

    def __repr__(self) -> str:
        return f"IntervalTrajectory(lower={self.lower.tolist()}, upper={self.upper.tolist()})"


class _Dataset:
    _item_type: type = object

    def __init__(self, entries: Iterable, dims: int | None = None, length: int | None = None):
        items = []
        for traj, label in entries:
            if not isinstance(traj, self._item_type):
                raise TypeError(f"expected {self._item_type.__name__}, got {type(traj).__name__}")
            items.append((traj, Label.of(label)))
        if items:
            shape = (len(items[0][0]), items[0][0].dims)
            for traj, _ in items:
                if (len(traj), traj.dims) != shape:
                    raise ValueError(
                        f"all trajectories must share length and dimension; got {(len(traj), traj.dims)} vs {shape}"
                    )
            if length is not None and length != shape[0] or dims is not None and dims != shape[1]:
                raise ValueError("declared dims/length disagree with entries")
            length, dims = shape
        elif dims is None or length is None:
            raise ValueError("an empty dataset needs explicit dims and length")
        self.entries: tuple = tuple(items)
        self.dims: int = dims
        self.length: int = length

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator:
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __bool__(self) -> bool:
        return bool(self.entries)

    def __eq__(self, other) -> bool:
        return (
            type(self) is type(other)
            and (self.dims, self.length) == (other.dims, other.length)
            and self.entries == other.entries
        )

    @property
    def labels(self) -> np.ndarray:
        return np.array([int(lab) for _, lab in self.entries], dtype=int)

    def count(self, label) -> int:
        label = Label.of(label)
        return sum(1 for _, lab in self.entries if lab == label)

    def subset(self, indices: Iterable[int]):
        return type(self)([self.entries[i] for i in indices], dims=self.dims, length=self.length)

    def with_labels_flipped(self):
        return type(self)(
            [(t, Label.NEG if lab == Label.POS else Label.POS) for t, lab in self.entries],
            dims=self.dims,
            length=self.length,
        )

    def __repr__(self) -> str:
        return (
            f"{type(self).__name__}({len(self)} entries, +{self.count(1)}/-{self.count(-1)}, "
            f"dims={self.dims}, length={self.length})"
        )


class LabeledDataset(_Dataset):
    """Labeled interval trajectories (the uncertainty-aware sample)."""

    _item_type = IntervalTrajectory

    @property
    def lower(self) -> np.ndarray:
        return np.stack([t.lower for t, _ in self.entries]) if self.entries else np.zeros((0, self.length, self.dims))

    @property
    def upper(self) -> np.ndarray:
        return np.stack([t.upper for t, _ in self.entries]) if self.entries else np.zeros((0, self.length, self.dims))


class PointDataset(_Dataset):
    """Labeled point trajectories, as used by the sampling baselines."""

    _item_type = Trajectory

    @property
    def values(self) -> np.ndarray:
        return np.stack([t.values for t, _ in self.entries]) if self.entries else np.zeros((0, self.length, self.dims))
