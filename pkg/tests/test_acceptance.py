"""The ten acceptance criteria, one test each.

Every test prints a single ``criterion N: PASS|FAIL ...`` line (visible
without ``-s``) and then asserts. Shared inputs (the random case set, the
separable datasets and their solver runs) are built once per module.
"""
import json
import math
import time

import numpy as np
import pytest

from uastl.cli import main as cli_main
from uastl.dataio import save_dataset
from uastl.encoder import ExternalSmtBackend, InternalEnumerativeBackend, decode_model, encode_interval
from uastl.experiments import BenchConfig, default_suite, run_one
from uastl.formula import (
    TEMPORAL,
    And,
    Not,
    Or,
    Predicate,
    formula_size,
    mixed_polarity_dimensions,
    within_horizon,
)
from uastl.grammar import default_grammar, single_predicate_grammar, threshold_domains
from uastl.inference import (
    InferenceParams,
    Inner,
    Leaf,
    constructive_classifier,
    sample_dataset,
    tli_rs_dt,
    tli_ua,
    tli_ua_dt,
    tree_depth,
    tree_to_formula,
)
from uastl.model import IntervalTrajectory, LabeledDataset, Trajectory
from uastl.objective import objective_dataset, split_interval, split_point
from uastl.semantics import (
    BEST,
    WORST,
    eval_strong,
    eval_weak,
    interval_robustness,
    interval_robustness_pair,
    oracle_interval_robustness,
    robustness,
)

from conftest import HAVE_Z3, random_formula, random_interval_trajectory

SEPARABLE_SUITE_SEED = 0
BENCH_SIZE = 2  # N used for the runtime comparison


@pytest.fixture
def report(capsys):
    def emit(num: int, name: str, ok: bool, detail: str = ""):
        with capsys.disabled():
            print(f"\ncriterion {num:>2} ({name}): {'PASS' if ok else 'FAIL'}  {detail}")
        return ok

    return emit


def close(a: float, b: float, tol: float) -> bool:
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= tol


# -- shared inputs -----------------------------------------------------------------

@pytest.fixture(scope="module")
def overlap_data():
    return LabeledDataset([
        (IntervalTrajectory([[4.0]], [[9.0]]), 1),
        (IntervalTrajectory([[1.0]], [[6.0]]), -1),
    ])


@pytest.fixture(scope="module")
def overlap_runs(overlap_data):
    """(backend name, grammar, result) of the size-1 run per available backend."""
    g = single_predicate_grammar(1)
    params = InferenceParams(max_size=1, grammar=g)
    runs = [("internal", g, tli_ua(overlap_data, params, InternalEnumerativeBackend()))]
    if HAVE_Z3:
        runs.append(("external", g, tli_ua(overlap_data, params, ExternalSmtBackend())))
    return runs


@pytest.fixture(scope="module")
def oracle_cases():
    """>= 1000 single-polarity (interval trajectory, formula, position) cases."""
    rng = np.random.default_rng(2024)
    cases = []
    while len(cases) < 1200:
        dims = int(rng.integers(1, 3))
        length = int(rng.integers(1, 7))
        phi = random_formula(rng, dims, length + 1, 4)
        if mixed_polarity_dimensions(phi):
            continue
        cases.append((random_interval_trajectory(rng, length, dims), phi, int(rng.integers(0, length))))
    return cases


@pytest.fixture(scope="module")
def separable_suite():
    return [(name, data) for name, data in default_suite(SEPARABLE_SUITE_SEED) if name.startswith("separable")]


@pytest.fixture(scope="module")
def separable_runs(separable_suite):
    """Per dataset: (name, data, constructed formula, tli_ua result, seconds)."""
    out = []
    for name, data in separable_suite:
        phi = constructive_classifier(data)
        params = InferenceParams(max_size=formula_size(phi), min_robustness=0.0, timeout=1000.0)
        start = time.monotonic()
        res = tli_ua(data, params, InternalEnumerativeBackend())
        out.append((name, data, phi, res, time.monotonic() - start))
    return out


# -- criteria ------------------------------------------------------------------------

def test_c1_overlap_exactness(overlap_data, overlap_runs, tmp_path, capsys, report):
    path = tmp_path / "overlap.json"
    save_dataset(overlap_data, path)
    start = time.monotonic()
    code = cli_main(["infer-ua", str(path), "--max-size", "1", "--grammar", "x1>", "--json"])
    secs = time.monotonic() - start
    out = json.loads(capsys.readouterr().out)
    ok = code == 0 and close(out["F"], -1.0, 1e-6) and out["formula"] == "x1 > 5" and secs < 5
    details = [f"cli {secs:.2f}s"]
    for name, _, res in overlap_runs:
        attained = objective_dataset(overlap_data, res.formula)
        ok &= close(res.value, -1.0, 1e-6) and close(attained, -1.0, 1e-6)
        if name == "internal":
            ok &= res.formula == Predicate.on(1, 5.0)
        details.append(f"{name}: {res.formula_text} F={res.value:g}")
    assert report(1, "overlap example exactness", ok, "; ".join(details))


def test_c2_monitor_matches_oracle(oracle_cases, report):
    start = time.monotonic()
    bad = 0
    for itraj, phi, j in oracle_cases:
        for view in (WORST, BEST):
            if not close(interval_robustness(itraj, phi, j, view), oracle_interval_robustness(itraj, phi, j, view), 1e-9):
                bad += 1
    secs = time.monotonic() - start
    ok = bad == 0 and secs < 60 and len(oracle_cases) >= 1000
    assert report(2, "monitor vs oracle", ok, f"{len(oracle_cases)} cases, {bad} mismatches, {secs:.1f}s")


def test_c3_duality(oracle_cases, report):
    bad = 0
    for itraj, phi, j in oracle_cases:
        lo, hi = interval_robustness_pair(itraj, phi, j)
        if interval_robustness(itraj, Not(phi), j, WORST) != -hi or interval_robustness(itraj, Not(phi), j, BEST) != -lo:
            bad += 1
    assert report(3, "duality", bad == 0, f"{len(oracle_cases)} cases, {bad} violations")


def test_c4_degenerate_collapse(report):
    rng = np.random.default_rng(7)
    bad = 0
    for _ in range(100):
        dims, length = int(rng.integers(1, 3)), int(rng.integers(1, 7))
        it = random_interval_trajectory(rng, length, dims, degenerate=True)
        phi = random_formula(rng, dims, length + 1, 6)
        j = int(rng.integers(0, length))
        r = robustness(Trajectory(it.lower), phi, j)
        if interval_robustness_pair(it, phi, j) != (r, r):
            bad += 1
    assert report(4, "degenerate collapse", bad == 0, f"100 point boxes, {bad} mismatches")


def test_c5_separable_suite(separable_runs, report):
    ok = len(separable_runs) == 5
    parts = []
    for name, data, phi, res, secs in separable_runs:
        Fc = objective_dataset(data, phi)
        ok &= Fc > 0 and res.value >= 0 and secs < 1000
        parts.append(f"{name}: constructed F={Fc:.3g} (size {formula_size(phi)}), inferred F={res.value:.3g} at n={res.size} in {secs:.1f}s")
    assert report(5, "separable suite", ok, "; ".join(parts))


def _clipped_nonempty(phi, T: int, j: int) -> bool:
    """Every temporal node evaluated from ``j`` has a nonempty window after clipping."""
    def walk(node, k):
        if k >= T:
            return True  # never reached by the clipped recursion
        if isinstance(node, TEMPORAL):
            lo, hi = k + node.window.a, min(k + node.window.b, T)
            if lo >= hi:
                return False
            return all(walk(c, m) for m in range(lo, hi) for c in node.children)
        return all(walk(c, k) for c in node.children)

    return walk(phi, j)


def test_c6_strong_implies_weak(report):
    rng = np.random.default_rng(11)
    weak_bad = rob_bad = rob_checked = literal_cex = 0
    for _ in range(10_000):
        dims, length = int(rng.integers(1, 3)), int(rng.integers(1, 7))
        traj = Trajectory(rng.integers(-10, 11, size=(length, dims)) / 2)
        phi = random_formula(rng, dims, length + 2, 6)
        j = int(rng.integers(0, length))
        if eval_strong(traj, phi, j) and not eval_weak(traj, phi, j):
            weak_bad += 1
        positive = robustness(traj, phi, 0) > 0
        if within_horizon(phi, length):
            rob_checked += 1
            if positive and not eval_strong(traj, phi, 0):
                rob_bad += 1
        elif positive and _clipped_nonempty(phi, length, 0) and not eval_strong(traj, phi, 0):
            literal_cex += 1
    ok = weak_bad == 0 and rob_bad == 0
    detail = (
        f"10000 cases, strong-not-weak {weak_bad}; robust-not-strong {rob_bad} of {rob_checked} within-horizon cases"
        f" ({literal_cex} counterexamples outside the horizon with nonempty clipped windows)"
    )
    assert report(6, "strong implies weak", ok, detail)


def test_c7_decode_consistency(overlap_data, overlap_runs, separable_runs, report):
    checked = bad = 0
    jobs = [(overlap_data, g, res) for _, g, res in overlap_runs]
    jobs += [(data, default_grammar(data.dims), res) for _, data, _, res, _ in separable_runs]
    for data, g, res in jobs:
        for m in res.models:
            phi = decode_model(m, g)
            checked += 1
            roots = [interval_robustness_pair(t, phi) for t, _ in data]
            same_roots = all(close(a, c, 1e-6) and close(b, d, 1e-6) for (a, b), (c, d) in zip(m.root_values, roots))
            if not (same_roots and len(roots) == len(m.root_values) and close(m.objective, objective_dataset(data, phi), 1e-6)):
                bad += 1
    assert report(7, "decode consistency", bad == 0 and checked > 0, f"{checked} models, {bad} inconsistent")


def _ids(data) -> list[int]:
    return sorted(id(t) for t, _ in data)


def _partitions(tree, data, split) -> bool:
    if isinstance(tree, Leaf):
        return (tree.positives, tree.negatives) == (data.count(1), data.count(-1))
    acc, rej = split(data, tree.formula)
    if sorted(_ids(acc) + _ids(rej)) != _ids(data):
        return False
    return _partitions(tree.left, acc, split) and _partitions(tree.right, rej, split)


def test_c8_decision_trees(report):
    p1, p2 = Predicate.on(1, 1.0), Predicate.on(1, 2.0)
    nested = tree_to_formula(Inner(p1, Inner(p2, Leaf(True), Leaf(False)), Leaf(True)))
    ok = nested == Or(And(p1, p2), Not(p1))
    params = InferenceParams(max_size=BENCH_SIZE)
    depths = []
    for name, data in default_suite(SEPARABLE_SUITE_SEED):
        ua = tli_ua_dt(data, params)
        pts = sample_dataset(data, params.samples_per_interval, params.seed)
        rs = tli_rs_dt(pts, params)
        ok &= tree_depth(ua) <= len(data) and tree_depth(rs) <= len(pts)
        ok &= _partitions(ua, data, split_interval) and _partitions(rs, pts, split_point)
        depths.append(f"{tree_depth(ua)}/{tree_depth(rs)}")
    assert report(8, "decision trees", ok, f"nested shape {'ok' if nested == Or(And(p1, p2), Not(p1)) else 'wrong'}; depths ua/rs {' '.join(depths)}")


def test_c9_ua_faster_than_rs(report):
    cfg = BenchConfig(params=InferenceParams(max_size=BENCH_SIZE, samples_per_interval=200))
    ok, parts = True, []
    for name, data in default_suite(SEPARABLE_SUITE_SEED):
        ua = run_one("TLI-UA", name, data, cfg)
        rs = run_one("TLI-RS", name, data, cfg)
        ok &= ua.error is None and rs.error is None and ua.seconds < rs.seconds
        parts.append(f"{name} {ua.seconds:.3f}s vs {rs.seconds:.2f}s")
    assert report(9, "UA faster than RS", ok, f"N={BENCH_SIZE}: " + "; ".join(parts))


@pytest.mark.z3
def test_c10_backends_agree(separable_runs, report):
    if not HAVE_Z3:
        report(10, "backend agreement", False, "SKIPPED: no z3 executable on PATH")
        pytest.skip("z3 executable not on PATH")
    ok, parts = True, []
    for name, data, _, _, _ in separable_runs:
        g = default_grammar(data.dims)
        dom = threshold_domains(g, data)
        for n in (1, 2):
            enc = encode_interval(data, n, g, dom)
            fi = objective_dataset(data, decode_model(InternalEnumerativeBackend().optimize(enc), g))
            start = time.monotonic()
            try:
                fe = objective_dataset(data, decode_model(ExternalSmtBackend().optimize(enc, timeout=1000), g))
            except Exception as exc:  # a timeout or solver failure is a failed comparison
                ok = False
                parts.append(f"{name} n={n}: external failed ({type(exc).__name__})")
                continue
            ok &= close(fi, fe, 1e-3)
            parts.append(f"{name} n={n}: {fi:.6g} vs {fe:.6g} ({time.monotonic() - start:.0f}s)")
    assert report(10, "backend agreement", ok, "; ".join(parts))
