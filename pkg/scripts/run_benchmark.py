#!/usr/bin/env python3
"""Desk-scale benchmark: separable blobs vs. a shuffled-label control.

Runs the full five-fold ensemble pipeline on synthetic data and prints
both grids, mirroring what `randnet synth` + `randnet cv` do end to end.

Usage:
    python scripts/run_benchmark.py --n 400 --dim 20 --sep 4 --seed 7
"""

import argparse
import time

from randnet.cv import ExperimentConfig, run_cv
from randnet.models import ModelConfig
from randnet.synth import make_blobs


def grid(result):
    header = f"{'':8}" + "".join(f"{h:>13}" for h in
                                 ("Accuracy", "Specificity", "Precision", "Sensitivity", "F1-score"))
    lines = [header]
    rows = [(f"Fold{i + 1}", r) for i, r in enumerate(result.fold_reports)]
    rows.append(("Average", result.aggregate))
    for name, rep in rows:
        cells = "".join(
            f"{'n/a':>13}" if v is None else f"{v:>13.4f}"
            for v in (rep.accuracy, rep.specificity, rep.precision, rep.sensitivity, rep.f1)
        )
        lines.append(f"{name:8}" + cells)
    return "\n".join(lines)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=400)
    parser.add_argument("--dim", type=int, default=20)
    parser.add_argument("--sep", type=float, default=4.0)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--hidden", type=int, default=400)
    args = parser.parse_args()

    cfg = ExperimentConfig(
        model=ModelConfig(hidden_nodes=args.hidden), mode="ensemble", master_seed=args.seed
    )
    for title, shuffle in (("separable blobs", False), ("shuffled-label control", True)):
        ds = make_blobs(n=args.n, dim=args.dim, sep=args.sep, seed=args.seed,
                        shuffle_labels=shuffle)
        t0 = time.perf_counter()
        result = run_cv(ds, cfg)
        print(f"\n== {title} (N={args.n}, dim={args.dim}, sep={args.sep}, "
              f"H={args.hidden}, {time.perf_counter() - t0:.2f}s) ==")
        print(grid(result))


if __name__ == "__main__":
    main()
