#!/usr/bin/env python3
"""Single-variant vs. ensemble comparison under one master seed.

Usage:
    python scripts/run_ablation.py --n 400 --dim 20 --sep 1 --seed 7
"""

import argparse

from randnet.cv import ABLATION_MODES, ExperimentConfig, run_ablation
from randnet.models import ModelConfig
from randnet.synth import make_blobs


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=400)
    parser.add_argument("--dim", type=int, default=20)
    parser.add_argument("--sep", type=float, default=1.0,
                        help="per-feature class-mean separation; 1.0 keeps the task hard enough to show mode differences")
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--hidden", type=int, default=400)
    args = parser.parse_args()

    ds = make_blobs(n=args.n, dim=args.dim, sep=args.sep, seed=args.seed)
    base = ExperimentConfig(model=ModelConfig(hidden_nodes=args.hidden), master_seed=args.seed)
    results = run_ablation(ds, base)

    header = f"{'':12}" + "".join(f"{h:>13}" for h in
                                  ("Accuracy", "Specificity", "Precision", "Sensitivity", "F1-score"))
    print(header)
    for mode in ABLATION_MODES:
        rep = results[mode].aggregate
        cells = "".join(
            f"{'n/a':>13}" if v is None else f"{v:>13.4f}"
            for v in (rep.accuracy, rep.specificity, rep.precision, rep.sensitivity, rep.f1)
        )
        print(f"{mode:12}" + cells)


if __name__ == "__main__":
    main()
