import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from uastl.dataio import DatasetFormatError, dataset_from_dict, dataset_to_dict, load_dataset, save_dataset
from uastl.model import Interval, IntervalTrajectory, Label, LabeledDataset, PointDataset, Trajectory

from conftest import interval_trajectories, trajectories


def test_label_parsing():
    assert Label.of(1) is Label.POS and Label.of("-1") is Label.NEG
    with pytest.raises(ValueError):
        Label.of(0)


def test_interval_closed():
    a, b = Interval(0, 1), Interval(1, 2)
    assert a.intersects(b) and 1 in a and a.width == 1
    with pytest.raises(ValueError):
        Interval(2, 1)


def test_trajectory_readonly_and_shape():
    t = Trajectory([1.0, 2.0, 3.0])
    assert len(t) == 3 and t.dims == 1
    with pytest.raises(ValueError):
        t.values[0, 0] = 5
    with pytest.raises(ValueError):
        Trajectory([[np.nan]])
    with pytest.raises(ValueError):
        Trajectory(np.zeros((0, 1)))


def test_interval_trajectory_validation():
    with pytest.raises(ValueError):
        IntervalTrajectory([[2.0]], [[1.0]])
    with pytest.raises(ValueError):
        IntervalTrajectory([[1.0, 2.0]], [[1.0]])
    it = IntervalTrajectory.from_boxes([[Interval(0, 1), Interval(2, 3)]])
    assert it.dims == 2 and it[0][1] == Interval(2, 3)
    assert it.contains(Trajectory([[0.5, 2.0]]))
    assert not it.contains(Trajectory([[1.5, 2.0]]))


def test_point_box_is_degenerate():
    t = Trajectory([[1.0], [2.0]])
    it = IntervalTrajectory.point(t)
    assert it.is_degenerate and it.contains(t)


def test_dataset_shape_checks():
    a = IntervalTrajectory([[0.0]], [[1.0]])
    b = IntervalTrajectory([[0.0], [0.0]], [[1.0], [1.0]])
    with pytest.raises(ValueError):
        LabeledDataset([(a, 1), (b, -1)])
    with pytest.raises(TypeError):
        LabeledDataset([(Trajectory([[0.0]]), 1)])
    with pytest.raises(ValueError):
        LabeledDataset([])
    empty = LabeledDataset([], dims=1, length=2)
    assert len(empty) == 0 and not empty


def test_dataset_counts_and_flip(overlap):
    assert overlap.count(1) == 1 and overlap.count(-1) == 1
    flipped = overlap.with_labels_flipped()
    assert list(flipped.labels) == [-1, 1]
    assert overlap.subset([1])[0][1] is Label.NEG


@given(st.lists(st.tuples(interval_trajectories(length=3, dims=2), st.sampled_from([1, -1])), min_size=1, max_size=4))
def test_json_roundtrip(entries):
    data = LabeledDataset(entries)
    back = dataset_from_dict(json.loads(json.dumps(dataset_to_dict(data))))
    assert back == data


@given(st.lists(st.tuples(trajectories(length=2, dims=2), st.sampled_from([1, -1])), min_size=1, max_size=4))
def test_point_json_roundtrip(entries):
    data = PointDataset(entries)
    assert dataset_from_dict(dataset_to_dict(data)) == data


@pytest.mark.parametrize("suffix", [".json", ".csv"])
def test_file_roundtrip(tmp_path, overlap, suffix):
    path = tmp_path / f"d{suffix}"
    save_dataset(overlap, path)
    assert load_dataset(path) == overlap


def test_csv_point_roundtrip(tmp_path):
    data = PointDataset([(Trajectory([[1.0, 2.0], [3.0, 4.0]]), 1), (Trajectory([[0.0, 0.0], [1.0, 1.0]]), -1)])
    save_dataset(data, tmp_path / "p.csv")
    assert load_dataset(tmp_path / "p.csv") == data


def test_bad_files(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(DatasetFormatError):
        load_dataset(p)
    with pytest.raises(DatasetFormatError):
        dataset_from_dict({"dims": 1, "length": 1, "entries": []})
    with pytest.raises(DatasetFormatError):
        dataset_from_dict({"dims": 1, "length": 1, "entries": [{"label": 1, "lower": [[2]], "upper": [[1]]}]})
    with pytest.raises(DatasetFormatError):
        dataset_from_dict({"dims": 2, "length": 1, "entries": [{"label": 1, "lower": [[0]], "upper": [[1]]}]})
