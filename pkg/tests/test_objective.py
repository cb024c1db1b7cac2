import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from uastl.formula import Not, Predicate, Top
from uastl.model import LabeledDataset, PointDataset, Trajectory
from uastl.objective import (
    averaged_margin,
    objective_dataset,
    objective_entries,
    objective_single,
    split_interval,
    split_point,
)

from conftest import formulas, interval_trajectories


@pytest.mark.parametrize("c, expected", [(4.0, -2.0), (5.0, -1.0), (6.0, -2.0), (5.5, -1.5)])
def test_overlap_objective(overlap, c, expected):
    assert objective_dataset(overlap, Predicate.on(1, c)) == expected


def test_negative_entry_uses_negation(overlap):
    neg = overlap[1][0]
    phi = Predicate.on(1, 5.0)
    assert objective_single(neg, -1, phi) == objective_single(neg, 1, Not(phi)) == -1.0


def test_separable_pair_margin(separable_pair):
    assert objective_entries(separable_pair, Predicate.on(1, 3.5)) == [0.5, 0.5]


def test_empty_dataset_rejected():
    with pytest.raises(ValueError):
        objective_dataset(LabeledDataset([], dims=1, length=1), Top())


def test_averaged_margin():
    assert averaged_margin(-1.0, 3.0) == 1.0
    assert averaged_margin(math.inf, math.inf) == math.inf
    assert averaged_margin(-math.inf, math.inf) == 0.0


def test_split_interval_threshold(overlap):
    # averaged margins are 1.5 and -1.5
    acc, rej = split_interval(overlap, Predicate.on(1, 5.0))
    assert [int(l) for l in acc.labels] == [1] and [int(l) for l in rej.labels] == [-1]


def test_split_point():
    data = PointDataset([(Trajectory([[1.0]]), 1), (Trajectory([[3.0]]), -1)])
    acc, rej = split_point(data, Predicate.on(1, 2.0))
    assert acc[0][0] == data[1][0] and rej[0][0] == data[0][0]


@given(
    st.lists(st.tuples(interval_trajectories(length=3, dims=2), st.sampled_from([1, -1])), min_size=1, max_size=5),
    formulas(dims=2, horizon=4, max_size=5),
)
def test_split_partitions(entries, phi):
    data = LabeledDataset(entries)
    acc, rej = split_interval(data, phi)
    assert len(acc) + len(rej) == len(data)
    assert sorted(map(hash, acc.entries + rej.entries)) == sorted(map(hash, data.entries))


@given(
    st.lists(st.tuples(interval_trajectories(length=2, dims=1), st.sampled_from([1, -1])), min_size=1, max_size=5),
    formulas(dims=1, horizon=3, max_size=4),
)
def test_flipping_labels_is_negation(entries, phi):
    data = LabeledDataset(entries)
    assert objective_dataset(data.with_labels_flipped(), phi) == objective_dataset(data, Not(phi))
