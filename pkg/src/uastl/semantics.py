"""Boolean, robust and interval-robust semantics.

Conventions shared by all evaluators:

* ``r(ζ, ⊤, j) = +inf``; ``φ1 ⇒ φ2`` has robustness ``max(-r1, r2)``.
* Temporal windows are clipped to the valid indices ``0..T-1``; an empty
  clipped window yields ``-inf`` for max-aggregation (F, U) and ``+inf``
  for min-aggregation (G).
* Interval robustness is the node-wise recursion: predicates take the exact
  extremum of ``f`` over the box, negation swaps worst and best case, and
  every other operator propagates the same view. For formulas in which some
  signal dimension occurs with both polarities this can be more
  conservative than the true set-wise extremum; see
  :func:`uastl.formula.mixed_polarity_dimensions`.
"""
from __future__ import annotations

import enum
import math

import numpy as np

from .formula import (
    Always,
    And,
    Eventually,
    Formula,
    Implies,
    Not,
    Or,
    Predicate,
    Top,
    Until,
    affine,
    formula_dims,
    lookahead,
    nodes,
)
from .model import IntervalTrajectory, Trajectory

INF = math.inf


class RobustnessView(enum.Enum):
    WORST = "worst"
    BEST = "best"

    @property
    def dual(self) -> "RobustnessView":
        return RobustnessView.BEST if self is RobustnessView.WORST else RobustnessView.WORST


WORST = RobustnessView.WORST
BEST = RobustnessView.BEST


def _check_dims(phi: Formula, dims: int):
    d = formula_dims(phi)
    if d is not None and d != dims:
        raise ValueError(f"dimension mismatch: formula uses {d} dimensions, trajectory has {dims}")


# -- Boolean semantics ---------------------------------------------------------

def _sat(values: np.ndarray, node: Formula, j: int, strong: bool, memo: dict) -> bool:
    key = (id(node), j, strong)
    hit = memo.get(key)
    if hit is not None:
        return hit
    T = values.shape[0]
    if isinstance(node, Top):
        out = True
    elif isinstance(node, Predicate):
        if j < T:
            out = node.value(values[j]) > 0
        else:
            out = not strong
    elif isinstance(node, Not):
        out = not _sat(values, node.child, j, not strong, memo)
    elif isinstance(node, And):
        out = _sat(values, node.left, j, strong, memo) and _sat(values, node.right, j, strong, memo)
    elif isinstance(node, Or):
        out = _sat(values, node.left, j, strong, memo) or _sat(values, node.right, j, strong, memo)
    elif isinstance(node, Implies):
        out = (not _sat(values, node.left, j, not strong, memo)) or _sat(values, node.right, j, strong, memo)
    elif isinstance(node, Eventually):
        w = node.window
        out = any(_sat(values, node.child, k, strong, memo) for k in range(j + w.a, j + w.b))
    elif isinstance(node, Always):
        w = node.window
        out = all(_sat(values, node.child, k, strong, memo) for k in range(j + w.a, j + w.b))
    elif isinstance(node, Until):
        w = node.window
        out = False
        for k in range(j + w.a, j + w.b):
            if _sat(values, node.right, k, strong, memo):
                out = True
                break
            if not _sat(values, node.left, k, strong, memo):
                break
    else:
        raise TypeError(f"unknown node {node!r}")
    memo[key] = out
    return out


def eval_strong(traj: Trajectory, phi: Formula, j: int = 0) -> bool:
    """Strong satisfaction ``(ζ, t_j) |=_S φ``; positions past the end falsify atoms."""
    if j < 0:
        raise ValueError("negative timestep")
    _check_dims(phi, traj.dims)
    return _sat(traj.values, phi, j, True, {})


def eval_weak(traj: Trajectory, phi: Formula, j: int = 0) -> bool:
    """Weak satisfaction ``(ζ, t_j) |=_W φ``; positions past the end satisfy atoms."""
    if j < 0:
        raise ValueError("negative timestep")
    _check_dims(phi, traj.dims)
    return _sat(traj.values, phi, j, False, {})


# -- robustness ---------------------------------------------------------------

def _window_positions(j: int, a: int, b: int, T: int) -> range:
    return range(j + a, min(j + b, T))


def _rob(values: np.ndarray, node: Formula, j: int, memo: dict) -> float:
    key = (id(node), j)
    hit = memo.get(key)
    if hit is not None:
        return hit
    T = values.shape[0]
    if isinstance(node, Top):
        out = INF
    elif isinstance(node, Predicate):
        out = node.value(values[j])
    elif isinstance(node, Not):
        out = -_rob(values, node.child, j, memo)
    elif isinstance(node, And):
        out = min(_rob(values, node.left, j, memo), _rob(values, node.right, j, memo))
    elif isinstance(node, Or):
        out = max(_rob(values, node.left, j, memo), _rob(values, node.right, j, memo))
    elif isinstance(node, Implies):
        out = max(-_rob(values, node.left, j, memo), _rob(values, node.right, j, memo))
    elif isinstance(node, Eventually):
        w = node.window
        out = max((_rob(values, node.child, k, memo) for k in _window_positions(j, w.a, w.b, T)), default=-INF)
    elif isinstance(node, Always):
        w = node.window
        out = min((_rob(values, node.child, k, memo) for k in _window_positions(j, w.a, w.b, T)), default=INF)
    elif isinstance(node, Until):
        w = node.window
        out = -INF
        prefix = INF
        for k in _window_positions(j, w.a, w.b, T):
            out = max(out, min(_rob(values, node.right, k, memo), prefix))
            prefix = min(prefix, _rob(values, node.left, k, memo))
    else:
        raise TypeError(f"unknown node {node!r}")
    memo[key] = out
    return out


def robustness(traj: Trajectory, phi: Formula, j: int = 0) -> float:
    """Robustness margin ``r(ζ, φ, t_j)`` with windows clipped to the horizon."""
    if not 0 <= j < len(traj):
        raise ValueError(f"timestep {j} outside 0..{len(traj) - 1}")
    _check_dims(phi, traj.dims)
    return _rob(traj.values, phi, j, {})


def _irob(itraj: IntervalTrajectory, node: Formula, j: int, worst: bool, memo: dict) -> float:
    key = (id(node), j, worst)
    hit = memo.get(key)
    if hit is not None:
        return hit
    T = len(itraj)
    if isinstance(node, Top):
        out = INF
    elif isinstance(node, Predicate):
        out = node.value(node.corner(itraj.lower[j], itraj.upper[j], worst))
    elif isinstance(node, Not):
        out = -_irob(itraj, node.child, j, not worst, memo)
    elif isinstance(node, And):
        out = min(_irob(itraj, node.left, j, worst, memo), _irob(itraj, node.right, j, worst, memo))
    elif isinstance(node, Or):
        out = max(_irob(itraj, node.left, j, worst, memo), _irob(itraj, node.right, j, worst, memo))
    elif isinstance(node, Implies):
        out = max(-_irob(itraj, node.left, j, not worst, memo), _irob(itraj, node.right, j, worst, memo))
    elif isinstance(node, Eventually):
        w = node.window
        out = max((_irob(itraj, node.child, k, worst, memo) for k in _window_positions(j, w.a, w.b, T)), default=-INF)
    elif isinstance(node, Always):
        w = node.window
        out = min((_irob(itraj, node.child, k, worst, memo) for k in _window_positions(j, w.a, w.b, T)), default=INF)
    elif isinstance(node, Until):
        w = node.window
        out = -INF
        prefix = INF
        for k in _window_positions(j, w.a, w.b, T):
            out = max(out, min(_irob(itraj, node.right, k, worst, memo), prefix))
            prefix = min(prefix, _irob(itraj, node.left, k, worst, memo))
    else:
        raise TypeError(f"unknown node {node!r}")
    memo[key] = out
    return out


def interval_robustness(
    itraj: IntervalTrajectory, phi: Formula, j: int = 0, view: RobustnessView = WORST
) -> float:
    """Worst-case (``r̲``) or best-case (``r̄``) robustness over an interval trajectory."""
    if not 0 <= j < len(itraj):
        raise ValueError(f"timestep {j} outside 0..{len(itraj) - 1}")
    _check_dims(phi, itraj.dims)
    return _irob(itraj, phi, j, view is WORST, {})


def interval_robustness_pair(itraj: IntervalTrajectory, phi: Formula, j: int = 0) -> tuple[float, float]:
    """``(r̲, r̄)`` computed with one shared memo table."""
    if not 0 <= j < len(itraj):
        raise ValueError(f"timestep {j} outside 0..{len(itraj) - 1}")
    _check_dims(phi, itraj.dims)
    memo: dict = {}
    return _irob(itraj, phi, j, True, memo), _irob(itraj, phi, j, False, memo)


# -- batch robustness over many point trajectories ------------------------------

def _shift(arr: np.ndarray, d: int, fill: float) -> np.ndarray:
    """``out[:, j] = arr[:, j + d]`` with ``fill`` past the end."""
    out = np.full_like(arr, fill)
    T = arr.shape[1]
    if d < T:
        out[:, : T - d] = arr[:, d:]
    return out


def robustness_table(values: np.ndarray, phi: Formula) -> np.ndarray:
    """Robustness of ``phi`` at every position for a batch of trajectories.

    ``values`` has shape ``(C, T, dims)``; the result has shape ``(C, T)``.
    Arithmetic follows :func:`robustness` operation for operation.
    """
    values = np.asarray(values, dtype=float)
    C, T, dims = values.shape
    _check_dims(phi, dims)
    tab: dict[int, np.ndarray] = {}
    for node in nodes(phi):
        if isinstance(node, Top):
            out = np.full((C, T), INF)
        elif isinstance(node, Predicate):
            lin = np.zeros((C, T))
            for k, w in enumerate(node.coefficients):
                if w:
                    lin = lin + w * values[:, :, k]
            out = lin - node.threshold if node.sense == ">" else node.threshold - lin
        elif isinstance(node, Not):
            out = -tab[id(node.child)]
        elif isinstance(node, And):
            out = np.minimum(tab[id(node.left)], tab[id(node.right)])
        elif isinstance(node, Or):
            out = np.maximum(tab[id(node.left)], tab[id(node.right)])
        elif isinstance(node, Implies):
            out = np.maximum(-tab[id(node.left)], tab[id(node.right)])
        elif isinstance(node, Eventually):
            child = tab[id(node.child)]
            out = np.full((C, T), -INF)
            for d in range(node.window.a, node.window.b):
                out = np.maximum(out, _shift(child, d, -INF))
        elif isinstance(node, Always):
            child = tab[id(node.child)]
            out = np.full((C, T), INF)
            for d in range(node.window.a, node.window.b):
                out = np.minimum(out, _shift(child, d, INF))
        elif isinstance(node, Until):
            left, right = tab[id(node.left)], tab[id(node.right)]
            out = np.full((C, T), -INF)
            prefix = np.full((C, T), INF)
            for d in range(node.window.a, node.window.b):
                # past the end the right operand is -inf, so the left fill never matters
                out = np.maximum(out, np.minimum(_shift(right, d, -INF), prefix))
                prefix = np.minimum(prefix, _shift(left, d, INF))
        else:
            raise TypeError(f"unknown node {node!r}")
        tab[id(node)] = out
    return tab[id(phi)]


# -- brute-force oracle ----------------------------------------------------------

class OracleTooLarge(ValueError):
    pass


def corner_trajectories(itraj: IntervalTrajectory, phi: Formula, j: int = 0, max_corners: int = 1 << 16) -> np.ndarray:
    """All corner trajectories of ``itraj`` that can matter to ``phi`` at ``j``.

    Only coordinates read by ``phi`` (dimensions with a nonzero coefficient,
    timesteps within its lookahead) and with ``lo < hi`` are enumerated; all
    other coordinates sit at their lower bound.
    """
    T = len(itraj)
    dims_used = sorted({k for p in nodes(phi) if isinstance(p, Predicate) for k, w in enumerate(p.coefficients) if w})
    last = min(T, j + lookahead(phi) + 1)
    free = [
        (t, k)
        for t in range(j, last)
        for k in dims_used
        if itraj.lower[t, k] < itraj.upper[t, k]
    ]
    count = 1 << len(free)
    if count > max_corners:
        raise OracleTooLarge(f"{count} corner trajectories exceed the cap of {max_corners}")
    out = np.broadcast_to(itraj.lower, (count,) + itraj.lower.shape).copy()
    idx = np.arange(count)
    for bit, (t, k) in enumerate(free):
        out[:, t, k] = np.where((idx >> bit) & 1, itraj.upper[t, k], itraj.lower[t, k])
    return out


def oracle_interval_robustness(
    itraj: IntervalTrajectory,
    phi: Formula,
    j: int = 0,
    view: RobustnessView = WORST,
    samples: int = 0,
    seed: int | None = 0,
    max_corners: int = 1 << 16,
) -> float:
    """Extremum of point robustness over corner (and optionally random) members."""
    if not 0 <= j < len(itraj):
        raise ValueError(f"timestep {j} outside 0..{len(itraj) - 1}")
    _check_dims(phi, itraj.dims)
    trajs = corner_trajectories(itraj, phi, j, max_corners)
    if samples:
        rng = np.random.default_rng(seed)
        extra = rng.uniform(itraj.lower, itraj.upper, size=(samples,) + itraj.lower.shape)
        trajs = np.concatenate([trajs, extra])
    vals = robustness_table(trajs, phi)[:, j]
    return float(vals.min() if view is WORST else vals.max())
