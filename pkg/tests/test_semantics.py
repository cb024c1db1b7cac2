import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from uastl.formula import (
    Always,
    And,
    Eventually,
    Implies,
    Not,
    Predicate,
    TimeWindow,
    Top,
    Until,
    mixed_polarity_dimensions,
)
from uastl.model import IntervalTrajectory, Trajectory
from uastl.semantics import (
    BEST,
    WORST,
    OracleTooLarge,
    corner_trajectories,
    eval_strong,
    eval_weak,
    interval_robustness,
    interval_robustness_pair,
    oracle_interval_robustness,
    robustness,
    robustness_table,
)

from conftest import formulas, interval_trajectories, trajectories

W = TimeWindow
gt2 = Predicate.on(1, 2.0)
traj = Trajectory([[1.0], [3.0], [2.0]])


# -- hand-computed values -------------------------------------------------------

@pytest.mark.parametrize("phi, expected", [
    (gt2, -1.0),
    (Eventually(W(0, 2), gt2), 1.0),
    (Always(W(0, 3), gt2), -1.0),
    (Eventually(W(1, 5), gt2), 1.0),  # clipped to steps 1..2
    (Eventually(W(3, 5), gt2), -math.inf),  # empty after clipping
    (Always(W(3, 5), gt2), math.inf),
    (Until(W(0, 3), Predicate.on(1, 0.0), Predicate.on(1, 2.5)), 0.5),
    (Implies(gt2, Predicate.on(1, 0.0, "<")), 1.0),
    (Not(Top()), -math.inf),
])
def test_robustness_by_hand(phi, expected):
    assert robustness(traj, phi, 0) == expected


def test_robustness_later_position():
    assert robustness(traj, Eventually(W(0, 2), gt2), 2) == 0.0
    with pytest.raises(ValueError):
        robustness(traj, gt2, 3)


def test_strong_weak_past_the_end():
    far = Eventually(W(0, 5), Predicate.on(1, 5.0))
    assert not eval_strong(traj, far) and eval_weak(traj, far)
    assert not eval_strong(traj, Always(W(0, 5), Predicate.on(1, 0.0)))
    assert eval_weak(traj, Always(W(0, 5), Predicate.on(1, 0.0)))
    # negation flips the view
    assert not eval_strong(traj, Not(far)) and eval_weak(traj, Not(far))


def test_until_boolean():
    phi = Until(W(0, 3), Predicate.on(1, 0.0), Predicate.on(1, 2.5))
    assert eval_strong(traj, phi) and eval_weak(traj, phi)
    blocked = Until(W(0, 3), Predicate.on(1, 2.0), Predicate.on(1, 2.5))
    assert not eval_strong(traj, blocked)


def test_interval_overlap_values():
    pos = IntervalTrajectory([[4.0]], [[9.0]])
    neg = IntervalTrajectory([[1.0]], [[6.0]])
    phi = Predicate.on(1, 5.0)
    assert interval_robustness_pair(pos, phi) == (-1.0, 4.0)
    assert interval_robustness_pair(neg, phi) == (-4.0, 1.0)
    assert interval_robustness(neg, Not(phi), 0, WORST) == -1.0


def test_dimension_mismatch_rejected():
    with pytest.raises(ValueError):
        robustness(traj, Predicate.on(2, 0.0, dims=2))


def test_mixed_polarity_is_conservative():
    # p | !p has member robustness |x1 - 1| >= 0, but the recursion takes
    # the worst of each side at a different corner
    box = IntervalTrajectory([[0.0]], [[3.0]])
    p = Predicate.on(1, 1.0)
    phi = p | Not(p)
    assert mixed_polarity_dimensions(phi) == [0]
    assert interval_robustness(box, phi) == -1.0
    assert oracle_interval_robustness(box, phi, samples=200) >= 0.0
    assert interval_robustness(box, phi, 0, BEST) == oracle_interval_robustness(box, phi, view=BEST) == 2.0


def test_corner_enumeration_only_free_coordinates():
    box = IntervalTrajectory([[0.0, 1.0], [2.0, 2.0]], [[1.0, 1.0], [3.0, 5.0]])
    phi = Eventually(W(0, 2), Predicate.on(1, 0.0, dims=2))
    # x1 is free at both steps, x2 unused
    assert corner_trajectories(box, phi).shape == (4, 2, 2)
    with pytest.raises(OracleTooLarge):
        corner_trajectories(box, phi, max_corners=2)


# -- properties ----------------------------------------------------------------

@given(trajectories(length=4, dims=2), formulas(dims=2, horizon=5, max_size=6), st.integers(0, 3))
def test_strong_implies_weak(t, phi, j):
    assert not eval_strong(t, phi, j) or eval_weak(t, phi, j)


@given(trajectories(length=4, dims=2), formulas(dims=2, horizon=5, max_size=6))
def test_table_matches_pointwise(t, phi):
    tab = robustness_table(t.values[None], phi)[0]
    assert list(tab) == [robustness(t, phi, j) for j in range(len(t))]


@given(interval_trajectories(length=3, dims=2), formulas(dims=2, horizon=4, max_size=5))
def test_duality(it, phi):
    lo, hi = interval_robustness_pair(it, phi)
    assert interval_robustness(it, Not(phi), 0, WORST) == -hi
    assert interval_robustness(it, Not(phi), 0, BEST) == -lo
    assert lo <= hi


@given(interval_trajectories(length=3, dims=2), formulas(dims=2, horizon=4, max_size=5), st.integers(0, 2**31))
def test_interval_bounds_every_member(it, phi, seed):
    lo, hi = interval_robustness_pair(it, phi)
    rng = np.random.default_rng(seed)
    members = rng.uniform(it.lower, it.upper, size=(20,) + it.lower.shape)
    members = np.concatenate([members, corner_trajectories(it, phi)])
    vals = robustness_table(members, phi)[:, 0]
    assert np.all(lo <= vals) and np.all(vals <= hi)


@given(interval_trajectories(length=3, dims=2), formulas(dims=2, horizon=4, max_size=5))
def test_single_polarity_matches_oracle(it, phi):
    if mixed_polarity_dimensions(phi):
        return
    assert interval_robustness(it, phi, 0, WORST) == oracle_interval_robustness(it, phi, 0, WORST)
    assert interval_robustness(it, phi, 0, BEST) == oracle_interval_robustness(it, phi, 0, BEST)


@given(trajectories(length=3, dims=2), formulas(dims=2, horizon=4, max_size=5), st.integers(0, 2))
def test_degenerate_box_collapses(t, phi, j):
    it = IntervalTrajectory.point(t)
    r = robustness(t, phi, j)
    assert interval_robustness_pair(it, phi, j) == (r, r)


@given(trajectories(length=3, dims=1), formulas(dims=1, horizon=3, max_size=5))
def test_positive_robustness_implies_strong_within_horizon(t, phi):
    from uastl.formula import within_horizon

    if within_horizon(phi, len(t)) and robustness(t, phi, 0) > 0:
        assert eval_strong(t, phi, 0)
