import shutil

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from uastl.formula import (
    Always,
    And,
    Eventually,
    Implies,
    Not,
    Or,
    Predicate,
    TimeWindow,
    Top,
    Until,
)
from uastl.model import IntervalTrajectory, LabeledDataset, Trajectory

settings.register_profile("default", max_examples=100, deadline=None)
settings.load_profile("default")

HAVE_Z3 = shutil.which("z3") is not None
needs_z3 = pytest.mark.skipif(not HAVE_Z3, reason="z3 executable not on PATH")


@pytest.fixture
def overlap():
    """x1 in [4, 9] labeled +1 and x1 in [1, 6] labeled -1, one timestep."""
    return LabeledDataset([
        (IntervalTrajectory([[4.0]], [[9.0]]), 1),
        (IntervalTrajectory([[1.0]], [[6.0]]), -1),
    ])


@pytest.fixture
def separable_pair():
    return LabeledDataset([
        (IntervalTrajectory([[4.0]], [[9.0]]), 1),
        (IntervalTrajectory([[1.0]], [[3.0]]), -1),
    ])


# -- strategies --------------------------------------------------------------------

halves = st.integers(-10, 10).map(lambda v: v / 2)


def coefficient_vectors(dims, signed=True):
    signs = (1.0, -1.0) if signed else (1.0,)
    units = [tuple(float(i == k) * s for i in range(dims)) for k in range(dims) for s in signs]
    if dims == 2:
        units += [(1.0, 1.0), (1.0, -1.0)]
    return st.sampled_from(units)


def predicates(dims, signed=True):
    return st.builds(Predicate, coefficient_vectors(dims, signed), halves, st.sampled_from([">", "<"]))


def windows(horizon):
    return st.tuples(st.integers(0, horizon - 1), st.integers(1, horizon)).filter(
        lambda ab: ab[0] < ab[1]
    ).map(lambda ab: TimeWindow(*ab))


@st.composite
def formulas(draw, dims=1, horizon=4, max_size=4, top=True, signed=True):
    """Tree-shaped formulas with at most ``max_size`` nodes.

    ``signed=False`` keeps to the default grammar's coefficient vectors.
    """
    budget = draw(st.integers(1, max_size))

    def gen(budget):
        if budget == 1:
            if top and draw(st.integers(0, 9)) == 0:
                return Top()
            return draw(predicates(dims, signed))
        if budget == 2:
            op = draw(st.sampled_from(["not", "F", "G"]))
        else:
            op = draw(st.sampled_from(["not", "F", "G", "and", "or", "imp", "U"]))
        if op == "not":
            return Not(gen(budget - 1))
        if op in ("F", "G"):
            cls = Eventually if op == "F" else Always
            return cls(draw(windows(horizon)), gen(budget - 1))
        left = draw(st.integers(1, budget - 2))
        a, b = gen(left), gen(budget - 1 - left)
        if op == "U":
            return Until(draw(windows(horizon)), a, b)
        return {"and": And, "or": Or, "imp": Implies}[op](a, b)

    return gen(budget)


@st.composite
def interval_trajectories(draw, length=3, dims=1, degenerate=False):
    lo = np.array(draw(st.lists(halves, min_size=length * dims, max_size=length * dims))).reshape(length, dims)
    if degenerate:
        return IntervalTrajectory(lo, lo)
    w = np.array(draw(st.lists(st.integers(0, 6), min_size=length * dims, max_size=length * dims))).reshape(length, dims) / 2
    return IntervalTrajectory(lo, lo + w)


@st.composite
def trajectories(draw, length=3, dims=1):
    v = draw(st.lists(halves, min_size=length * dims, max_size=length * dims))
    return Trajectory(np.array(v).reshape(length, dims))


def random_formula(rng, dims, horizon, max_size, top=True):
    """Numpy-driven counterpart of :func:`formulas` for bulk loops."""
    def pred():
        vecs = [tuple(float(i == k) * s for i in range(dims)) for k in range(dims) for s in (1.0, -1.0)]
        if dims == 2:
            vecs += [(1.0, 1.0), (1.0, -1.0)]
        return Predicate(vecs[rng.integers(len(vecs))], rng.integers(-10, 11) / 2, ">" if rng.random() < 0.5 else "<")

    def win():
        a = int(rng.integers(0, horizon))
        return TimeWindow(a, int(rng.integers(a + 1, horizon + 1)))

    def gen(budget):
        if budget == 1:
            return Top() if top and rng.random() < 0.1 else pred()
        ops = ["not", "F", "G"] if budget == 2 else ["not", "F", "G", "and", "or", "imp", "U"]
        op = ops[rng.integers(len(ops))]
        if op == "not":
            return Not(gen(budget - 1))
        if op in ("F", "G"):
            return (Eventually if op == "F" else Always)(win(), gen(budget - 1))
        left = int(rng.integers(1, budget - 1))
        a, b = gen(left), gen(budget - 1 - left)
        if op == "U":
            return Until(win(), a, b)
        return {"and": And, "or": Or, "imp": Implies}[op](a, b)

    return gen(int(rng.integers(1, max_size + 1)))


def random_interval_trajectory(rng, length, dims, degenerate=False):
    lo = rng.integers(-10, 11, size=(length, dims)) / 2
    if degenerate:
        return IntervalTrajectory(lo, lo)
    return IntervalTrajectory(lo, lo + rng.integers(0, 7, size=(length, dims)) / 2)
