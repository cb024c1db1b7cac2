"""Dataset files.

JSON is the canonical format::

    {"dims": n, "length": J+1,
     "entries": [{"label": 1, "lower": [[...]], "upper": [[...]]}, ...]}

Point datasets use ``"values"`` in place of ``lower``/``upper``.

CSV files hold one row per (entry, timestep) with columns ``entry``,
``label``, ``step`` and then either ``lo1..lon, hi1..hin`` (interval) or
``x1..xn`` (point). Rows may come in any order.
"""
from __future__ import annotations

import csv
import json
import os
from pathlib import Path

from .model import IntervalTrajectory, LabeledDataset, PointDataset, Trajectory


class DatasetFormatError(ValueError):
    pass


def dataset_to_dict(data) -> dict:
    entries = []
    for traj, lab in data:
        if isinstance(traj, IntervalTrajectory):
            entries.append({"label": int(lab), "lower": traj.lower.tolist(), "upper": traj.upper.tolist()})
        else:
            entries.append({"label": int(lab), "values": traj.values.tolist()})
    return {"dims": data.dims, "length": data.length, "entries": entries}


def dataset_from_dict(obj: dict):
    try:
        dims, length, raw = int(obj["dims"]), int(obj["length"]), obj["entries"]
    except (KeyError, TypeError, ValueError) as e:
        raise DatasetFormatError(f"dataset needs integer 'dims', 'length' and a list 'entries': {e}") from None
    if not raw:
        raise DatasetFormatError("dataset has no entries")
    point = "values" in raw[0]
    items = []
    for i, e in enumerate(raw):
        try:
            if point:
                traj = Trajectory(e["values"])
            else:
                traj = IntervalTrajectory(e["lower"], e["upper"])
            items.append((traj, e["label"]))
        except (KeyError, TypeError, ValueError) as err:
            raise DatasetFormatError(f"entry {i}: {err}") from None
    cls = PointDataset if point else LabeledDataset
    try:
        return cls(items, dims=dims, length=length)
    except ValueError as err:
        raise DatasetFormatError(str(err)) from None


def save_dataset(data, path: str | os.PathLike) -> None:
    path = Path(path)
    if path.suffix.lower() == ".csv":
        _save_csv(data, path)
        return
    path.write_text(json.dumps(dataset_to_dict(data), indent=1))


def load_dataset(path: str | os.PathLike):
    path = Path(path)
    if path.suffix.lower() == ".csv":
        return _load_csv(path)
    try:
        obj = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise DatasetFormatError(f"{path}: {e}") from None
    return dataset_from_dict(obj)


def _save_csv(data, path: Path):
    n = data.dims
    point = isinstance(data, PointDataset)
    header = ["entry", "label", "step"]
    header += [f"x{k + 1}" for k in range(n)] if point else [f"lo{k + 1}" for k in range(n)] + [f"hi{k + 1}" for k in range(n)]
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for i, (traj, lab) in enumerate(data):
            for j in range(data.length):
                row = traj.values[j].tolist() if point else traj.lower[j].tolist() + traj.upper[j].tolist()
                w.writerow([i, int(lab), j] + [repr(v) for v in row])


def _load_csv(path: Path):
    with path.open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise DatasetFormatError(f"{path}: no rows")
    cols = rows[0].keys()
    point = "x1" in cols
    prefix = ("x",) if point else ("lo", "hi")
    n = 0
    while all(f"{p}{n + 1}" in cols for p in prefix):
        n += 1
    if n == 0:
        raise DatasetFormatError(f"{path}: expected columns x1.. or lo1../hi1..")
    grouped: dict[str, dict] = {}
    try:
        for r in rows:
            e = grouped.setdefault(r["entry"], {"label": r["label"], "steps": {}})
            if r["label"] != e["label"]:
                raise DatasetFormatError(f"entry {r['entry']} has conflicting labels")
            e["steps"][int(r["step"])] = [[float(r[f"{p}{k + 1}"]) for k in range(n)] for p in prefix]
    except (KeyError, ValueError) as err:
        raise DatasetFormatError(f"{path}: {err}") from None
    items = []
    for key, e in grouped.items():
        steps = e["steps"]
        if sorted(steps) != list(range(len(steps))):
            raise DatasetFormatError(f"entry {key}: steps must be 0..J without gaps")
        seq = [steps[j] for j in range(len(steps))]
        try:
            if point:
                items.append((Trajectory([s[0] for s in seq]), int(e["label"])))
            else:
                items.append((IntervalTrajectory([s[0] for s in seq], [s[1] for s in seq]), int(e["label"])))
        except ValueError as err:
            raise DatasetFormatError(f"entry {key}: {err}") from None
    try:
        return (PointDataset if point else LabeledDataset)(items)
    except ValueError as err:
        raise DatasetFormatError(str(err)) from None
