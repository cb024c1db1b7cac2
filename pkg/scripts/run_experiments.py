"""Run the four algorithms on five separable and five non-separable random datasets.

    python scripts/run_experiments.py --max-size 2 --out bench-out

Writes results.json, results.csv and times.tsv (dataset, algorithm, seconds)
to the output directory and prints the UA/RS time ratio per dataset.
"""
import argparse
import logging
from collections import defaultdict

from uastl.experiments import BenchConfig, default_suite, run_bench, summary_table, write_results
from uastl.inference import InferenceParams

ap = argparse.ArgumentParser()
ap.add_argument("--max-size", type=int, default=2)
ap.add_argument("--samples", type=int, default=200)
ap.add_argument("--timeout", type=float, default=1000.0)
ap.add_argument("--suite-seed", type=int, default=0)
ap.add_argument("--workers", type=int, default=1)
ap.add_argument("--out", default="bench-out")
args = ap.parse_args()
logging.basicConfig(level=logging.INFO, format="%(message)s")

params = InferenceParams(max_size=args.max_size, samples_per_interval=args.samples, timeout=args.timeout)
results = run_bench(default_suite(args.suite_seed), BenchConfig(params=params, workers=args.workers))
write_results(results, args.out)
print(summary_table(results))

times = defaultdict(dict)
for r in results:
    times[r.dataset][r.algorithm] = r.seconds
print("\ndataset           UA/RS    UA-DT/RS-DT")
for name, t in times.items():
    print(f"{name:<16} {t['TLI-UA'] / t['TLI-RS']:>7.4f} {t['TLI-UA-DT'] / t['TLI-RS-DT']:>12.4f}")
