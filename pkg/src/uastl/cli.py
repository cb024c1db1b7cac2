"""Command-line front end.

Exit codes: 0 success, 2 parse or validation error, 3 solver failure,
4 timeout with a partial result.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
import time
from pathlib import Path

from .dataio import DatasetFormatError, load_dataset, save_dataset
from .encoder import SolverError, SolverTimeout, encode_interval, encode_point, make_backend
from .experiments import (
    ALGORITHMS,
    BenchConfig,
    GenConfig,
    default_suite,
    gen_dataset,
    run_bench,
    summary_table,
    write_results,
)
from .formula import formula_size, print_formula
from .grammar import GrammarError, PredicateFamily, PredicateGrammar, default_grammar, threshold_domains
from .inference import (
    InferenceParams,
    StopReason,
    classification_rate,
    print_tree,
    sample_dataset,
    tli_rs,
    tli_rs_dt,
    tli_ua,
    tli_ua_dt,
    tree_depth,
    tree_to_formula,
)
from .model import LabeledDataset, PointDataset
from .objective import objective_dataset, objective_entries
from .parser import FormulaSyntaxError, parse_formula
from .semantics import BEST, WORST, OracleTooLarge, interval_robustness_pair, oracle_interval_robustness

EXIT_OK, EXIT_INPUT, EXIT_SOLVER, EXIT_TIMEOUT = 0, 2, 3, 4

log = logging.getLogger("uastl")


class UsageError(ValueError):
    pass


def parse_grammar(spec: str, dims: int, bounds=None) -> PredicateGrammar:
    """``default``, ``axis``, or comma-separated families such as ``x1>,x1-x2<``."""
    extra = {"bounds": tuple(bounds)} if bounds else {}
    if spec == "default":
        return default_grammar(dims, **extra)
    if spec == "axis":
        return default_grammar(dims, pairs=False, **extra)
    fams = []
    for tok in spec.split(","):
        tok = tok.strip()
        if not tok or tok[-1] not in "<>":
            raise UsageError(f"grammar family {tok!r} must end in '>' or '<'")
        pred = parse_formula(f"{tok} 0", dims=dims)
        fams.append(PredicateFamily(pred.coefficients, pred.sense))
    return PredicateGrammar(dims, tuple(fams), **extra)


def _number(text: str) -> float:
    if text.lower() in ("inf", "+inf", "infinity"):
        return math.inf
    return float(text)


def _size(text: str) -> float:
    if text.lower() in ("inf", "infinity"):
        return math.inf
    return int(text)


def _params(args, dims: int) -> InferenceParams:
    return InferenceParams(
        max_size=args.max_size,
        min_robustness=args.min_robustness,
        min_classification=args.min_classification,
        samples_per_interval=args.samples,
        seed=args.seed,
        timeout=args.timeout,
        max_depth=getattr(args, "max_depth", None),
        grammar=parse_grammar(args.grammar, dims, args.bounds),
    )


def _interval_data(path: str) -> LabeledDataset:
    data = load_dataset(path)
    if not isinstance(data, LabeledDataset):
        raise UsageError(f"{path} holds point trajectories; this command needs interval trajectories")
    return data


def _point_data(path: str, params: InferenceParams) -> PointDataset:
    """Point datasets are used as is; interval datasets are sampled."""
    data = load_dataset(path)
    if isinstance(data, LabeledDataset):
        return sample_dataset(data, params.samples_per_interval, params.seed)
    return data


def _emit(args, payload: dict, text: str):
    if args.json:
        print(json.dumps(payload, indent=1, default=str))
    else:
        print(text)


def _write_smt(args, mode: str, data, n: int, grammar):
    if not args.emit_smt:
        return
    domains = threshold_domains(grammar, data)
    enc = encode_interval(data, n, grammar, domains) if mode == "interval" else encode_point(data, n, grammar, domains)
    Path(args.emit_smt).write_text(enc.script())


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def cmd_infer(args) -> int:
    ua = args.command.startswith("infer-ua")
    tree = args.command.endswith("-dt")
    if ua:
        data = _interval_data(args.data)
        params = _params(args, data.dims)
    else:
        raw = load_dataset(args.data)
        params = _params(args, raw.dims)
        data = _point_data(args.data, params)
    backend = make_backend(args.solver, args.solver_cmd)
    start = time.monotonic()
    if tree:
        trace: list = []
        t = (tli_ua_dt if ua else tli_rs_dt)(data, params, backend, trace=trace)
        secs = time.monotonic() - start
        phi = tree_to_formula(t)
        value = objective_dataset(data, phi) if ua else classification_rate(data, phi)
        timed_out = any(r.timed_out for r in trace)
        name = "F" if ua else "s"
        _emit(
            args,
            {"formula": print_formula(phi), name: value, "depth": tree_depth(t), "seconds": secs, "timeout": timed_out},
            f"{print_tree(t)}\nformula: {print_formula(phi)}\n{name} = {_fmt(value)}  depth = {tree_depth(t)}  ({secs:.3f} s)",
        )
        size = max((r.size for r in trace), default=1)
    else:
        res = (tli_ua if ua else tli_rs)(data, params, backend)
        name = "F" if ua else "s"
        timed_out = res.timed_out
        payload = {
            "formula": res.formula_text,
            name: res.value,
            "size": res.formula_size,
            "n": res.size,
            "stop": res.stop.value,
            "seconds": res.seconds,
            "history": res.history,
            "warnings": res.warnings,
        }
        lines = [res.formula_text, f"{name} = {_fmt(res.value)}  size = {res.formula_size}  stop: {res.stop.value}  ({res.seconds:.3f} s)"]
        lines += [f"warning: {w}" for w in res.warnings]
        _emit(args, payload, "\n".join(lines))
        size = res.size
    _write_smt(args, "interval" if ua else "point", data, size, params.grammar)
    return EXIT_TIMEOUT if timed_out else EXIT_OK


def cmd_eval(args) -> int:
    data = load_dataset(args.data)
    phi = parse_formula(args.formula, dims=data.dims)
    if isinstance(data, PointDataset):
        s = classification_rate(data, phi)
        _emit(args, {"formula": print_formula(phi), "s": s}, f"s = {_fmt(s)}")
        return EXIT_OK
    per = objective_entries(data, phi)
    pairs = [interval_robustness_pair(t, phi, 0) for t, _ in data]
    rows = [
        {"entry": i, "label": int(lab), "objective": f, "worst": lo, "best": hi}
        for i, ((_, lab), f, (lo, hi)) in enumerate(zip(data, per, pairs))
    ]
    F = min(per)
    text = [f"formula: {print_formula(phi)}  (size {formula_size(phi)})", f"F = {_fmt(F)}", "entry label   objective       worst        best"]
    text += [f"{r['entry']:>5} {r['label']:>5} {_fmt(r['objective']):>11} {_fmt(r['worst']):>11} {_fmt(r['best']):>11}" for r in rows]
    _emit(args, {"formula": print_formula(phi), "F": F, "entries": rows}, "\n".join(text))
    return EXIT_OK


def cmd_oracle(args) -> int:
    data = _interval_data(args.data)
    phi = parse_formula(args.formula, dims=data.dims)
    if args.entry is not None and not 0 <= args.entry < len(data):
        raise UsageError(f"entry {args.entry} outside 0..{len(data) - 1}")
    idx = range(len(data)) if args.entry is None else [args.entry]
    rows, ok = [], True
    for i in idx:
        itraj = data[i][0]
        lo, hi = interval_robustness_pair(itraj, phi, args.step)
        try:
            olo = oracle_interval_robustness(itraj, phi, args.step, WORST, args.samples, args.seed)
            ohi = oracle_interval_robustness(itraj, phi, args.step, BEST, args.samples, args.seed)
        except OracleTooLarge as e:
            raise UsageError(str(e)) from None
        match = olo == lo and ohi == hi
        ok &= match
        rows.append({"entry": i, "worst": lo, "best": hi, "oracle_worst": olo, "oracle_best": ohi, "match": match})
    text = ["entry       worst        best  oracle worst  oracle best  match"]
    text += [
        f"{r['entry']:>5} {_fmt(r['worst']):>11} {_fmt(r['best']):>11} {_fmt(r['oracle_worst']):>13} {_fmt(r['oracle_best']):>12}  {r['match']}"
        for r in rows
    ]
    _emit(args, {"formula": print_formula(phi), "entries": rows, "all_match": ok}, "\n".join(text))
    return EXIT_OK


def cmd_gen(args) -> int:
    cfg = GenConfig(kind=args.kind, dims=args.dims, per_class=args.per_class, length=args.length, seed=args.seed)
    data = gen_dataset(cfg)
    save_dataset(data, args.output)
    print(f"wrote {data} to {args.output}")
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.datasets:
        datasets = [(Path(p).stem, _interval_data(p)) for p in args.datasets]
    else:
        datasets = default_suite(args.suite_seed)
    results = []
    # one run per signal dimension, since the grammar depends on it
    for dims in sorted({d.dims for _, d in datasets}):
        cfg = BenchConfig(
            params=_params(args, dims),
            algorithms=tuple(args.algorithms),
            solver=args.solver,
            solver_cmd=args.solver_cmd,
            workers=args.workers,
        )
        results += run_bench([(n, d) for n, d in datasets if d.dims == dims], cfg)
    paths = write_results(results, args.out)
    print(summary_table(results))
    print(f"\nresults: {paths['json']}  table: {paths['csv']}  plot data: {paths['tsv']}")
    if any(r.stop == "error" for r in results):
        return EXIT_SOLVER
    if any(r.stop == StopReason.TIMEOUT.value for r in results):
        return EXIT_TIMEOUT
    return EXIT_OK


def _add_search_flags(p: argparse.ArgumentParser):
    p.add_argument("--max-size", type=_size, default=3, help="size cap N (integer or inf)")
    p.add_argument("--min-robustness", type=_number, default=0.0, help="stop once F >= R (inf: solve size N only)")
    p.add_argument("--min-classification", type=float, default=1.0, help="stop once the sample fraction s >= S")
    p.add_argument("--samples", type=int, default=200, help="samples per interval trajectory for the baselines")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--timeout", type=float, default=1000.0, help="seconds per solver call")
    p.add_argument("--solver", choices=("internal", "external"), default="internal")
    p.add_argument("--solver-cmd", default=None, help="external solver command line (default 'z3 -in')")
    p.add_argument("--grammar", default="default", help="default, axis, or families like 'x1>,x2<'")
    p.add_argument("--bounds", type=float, nargs=2, metavar=("LO", "HI"), help="fixed threshold domain")
    p.add_argument("--json", action="store_true", help="machine-readable output")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="uastl", description="Infer STL formulas from labeled interval trajectories.")
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("infer-ua", "uncertainty-aware inference"),
        ("infer-ua-dt", "uncertainty-aware decision tree"),
        ("infer-rs", "sampling baseline"),
        ("infer-rs-dt", "sampling baseline decision tree"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("data", help="dataset file (.json or .csv)")
        _add_search_flags(p)
        p.add_argument("--emit-smt", metavar="FILE", help="also write the SMT-LIB problem of the final size")
        if name.endswith("-dt"):
            p.add_argument("--max-depth", type=int, default=None)
        p.set_defaults(func=cmd_infer)

    p = sub.add_parser("eval", help="evaluate a formula on a dataset")
    p.add_argument("data")
    p.add_argument("formula")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("oracle", help="compare interval robustness against corner enumeration")
    p.add_argument("data")
    p.add_argument("formula")
    p.add_argument("--entry", type=int, default=None)
    p.add_argument("--step", type=int, default=0)
    p.add_argument("--samples", type=int, default=0, help="extra random members to include")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gen", help="generate a random dataset")
    p.add_argument("--kind", choices=("separable", "non-separable"), default="separable")
    p.add_argument("--dims", type=int, default=2)
    p.add_argument("--per-class", type=int, default=3)
    p.add_argument("--length", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="run all algorithms on a dataset suite")
    p.add_argument("datasets", nargs="*", help="dataset files (default: 5 separable + 5 non-separable generated)")
    _add_search_flags(p)
    p.add_argument("--suite-seed", type=int, default=0)
    p.add_argument("--algorithms", nargs="+", choices=ALGORITHMS, default=list(ALGORITHMS))
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default="bench-out")
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except FormulaSyntaxError as e:
        print(f"error: {e}", file=sys.stderr)
        if e.text:
            print(f"  {e.text}\n  {' ' * e.position}^", file=sys.stderr)
        return EXIT_INPUT
    except SolverTimeout as e:
        print(f"timeout: {e}", file=sys.stderr)
        return EXIT_TIMEOUT
    except SolverError as e:
        print(f"solver error: {e}", file=sys.stderr)
        return EXIT_SOLVER
    except (DatasetFormatError, GrammarError, UsageError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
