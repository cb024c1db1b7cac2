import csv
import json

import pytest

from uastl.experiments import (
    ALGORITHMS,
    BenchConfig,
    BenchResult,
    GenConfig,
    default_suite,
    gen_dataset,
    run_bench,
    run_one,
    summary_table,
    write_results,
)
from uastl.inference import InferenceParams, check_separable, dataset_separable


def test_gen_config_limits():
    for bad in (dict(kind="other"), dict(dims=3), dict(per_class=4), dict(length=11), dict(length=0)):
        with pytest.raises(ValueError):
            GenConfig(**bad)


@pytest.mark.parametrize("seed", range(5))
def test_generated_kinds(seed):
    sep = gen_dataset(kind="separable", seed=seed)
    assert dataset_separable(sep) and len(sep) == 6 and sep.length == 10 and sep.dims == 2
    non = gen_dataset(kind="non-separable", seed=seed)
    assert check_separable(non[0][0], non[3][0]) is None
    assert gen_dataset(kind="non-separable", seed=seed) == non


def test_default_suite_shape():
    suite = default_suite(0)
    assert [name for name, _ in suite][:2] == ["separable-0", "separable-1"]
    assert sum(name.startswith("non-") for name, _ in suite) == 5


def _small():
    return gen_dataset(dims=1, per_class=1, length=2, seed=1)


@pytest.mark.parametrize("alg", ALGORITHMS)
def test_run_one(alg):
    cfg = BenchConfig(params=InferenceParams(max_size=2, samples_per_interval=5))
    r = run_one(alg, "tiny", _small(), cfg)
    assert r.error is None and r.formula and r.seconds >= 0
    assert r.stop in ("margin reached", "size cap")


def test_run_one_reports_solver_failure():
    cfg = BenchConfig(params=InferenceParams(max_size=1), solver="external", solver_cmd="no-such-solver-exe")
    r = run_one("TLI-UA", "tiny", _small(), cfg)
    assert r.stop == "error" and "SolverError" in r.error


def test_bench_outputs(tmp_path):
    cfg = BenchConfig(params=InferenceParams(max_size=1, samples_per_interval=3), algorithms=("TLI-UA", "TLI-RS"))
    results = run_bench([("a", _small()), ("b", _small())], cfg)
    assert [(r.dataset, r.algorithm) for r in results] == [("a", "TLI-UA"), ("a", "TLI-RS"), ("b", "TLI-UA"), ("b", "TLI-RS")]
    paths = write_results(results, tmp_path)
    rows = json.loads(paths["json"].read_text())
    assert rows[0]["algorithm"] == "TLI-UA"
    with open(paths["csv"]) as fh:
        assert len(list(csv.DictReader(fh))) == 4
    assert paths["tsv"].read_text().splitlines()[0] == "dataset\talgorithm\tseconds"
    assert "TLI-RS" in summary_table(results)


def test_bench_result_rejects_negative_time():
    with pytest.raises(ValueError):
        BenchResult("TLI-UA", "d", -1.0, "", 0.0, "size cap")
