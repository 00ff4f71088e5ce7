"""Command-line surface: synth, train, predict, cv, ablate, extract.

Exit codes: 0 success, 1 runtime failure (diagnostic on stderr), 2 flag
misuse. All file outputs are byte-deterministic for identical flags and
inputs; wall-clock timings go to stdout only, never into report files.
"""

from __future__ import annotations

import argparse
import shutil
import subprocess
import sys

from . import dataio, synth
from .cv import ABLATION_MODES, MODES, ExperimentConfig, run_ablation, run_cv
from .ensemble import EnsembleModel, ensemble_predict, ensemble_train, load_classifier, save_ensemble
from .metrics import compute_metrics, confusion
from .models import (
    ACTIVATIONS,
    DISTRIBUTIONS,
    ModelConfig,
    encode_onehot,
    predict_labels,
    save_model,
    train_variant,
)

EXTRACTOR_EXECUTABLE = "featex"

_COLUMNS = ("accuracy", "specificity", "precision", "sensitivity", "f1")
_HEADERS = ("Accuracy", "Specificity", "Precision", "Sensitivity", "F1-score")


def _positive_int(minimum, flag, maximum=None):
    def parse(text):
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{flag} expects an integer")
        if value < minimum:
            raise argparse.ArgumentTypeError(f"{flag} must be >= {minimum}")
        if maximum is not None and value > maximum:
            raise argparse.ArgumentTypeError(f"{flag} must be <= {maximum}")
        return value

    return parse


def _nonneg_float(flag):
    def parse(text):
        try:
            value = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{flag} expects a number")
        if value < 0:
            raise argparse.ArgumentTypeError(f"{flag} must be >= 0")
        return value

    return parse


def _add_model_flags(parser):
    parser.add_argument(
        "--hidden",
        type=_positive_int(1, "--hidden"),
        default=400,
        help="hidden nodes per network (default: 400)",
    )
    parser.add_argument(
        "--activation",
        choices=sorted(ACTIVATIONS),
        default="sigmoid",
        help="hidden activation (default: sigmoid)",
    )
    parser.add_argument(
        "--dist",
        choices=DISTRIBUTIONS,
        default="uniform_pm1",
        help="hidden weight/bias distribution (default: uniform_pm1)",
    )
    parser.add_argument(
        "--seed",
        type=_positive_int(0, "--seed", maximum=2**64 - 1),
        default=0,
        help="master seed (default: 0)",
    )
    parser.add_argument(
        "--ridge",
        type=_nonneg_float("--ridge"),
        default=0.0,
        help="optional ridge term for the output-weight solve (default: 0)",
    )


def _model_config(args) -> ModelConfig:
    return ModelConfig(
        hidden_nodes=args.hidden,
        activation=args.activation,
        distribution=args.dist,
        seed=args.seed,
        ridge_lambda=args.ridge,
    )


def _grid(rows: list[tuple[str, object]]) -> str:
    """Fixed-width table: one row per (name, MetricsReport)."""
    label_width = max(len(name) for name, _ in rows)
    lines = [" ".join([" " * label_width] + [f"{h:>12}" for h in _HEADERS])]
    for name, report in rows:
        cells = [
            f"{'n/a':>12}" if getattr(report, col) is None else f"{getattr(report, col):>12.4f}"
            for col in _COLUMNS
        ]
        lines.append(" ".join([f"{name:<{label_width}}"] + cells))
    return "\n".join(lines)


def _print_cv_grid(result) -> None:
    rows = [(f"Fold{i + 1}", rep) for i, rep in enumerate(result.fold_reports)]
    rows.append(("Average", result.aggregate))
    print(_grid(rows))


# --- subcommands ------------------------------------------------------------


def _cmd_synth(args) -> int:
    if args.kind == "blobs":
        ds = synth.make_blobs(
            n=args.n,
            dim=args.dim,
            sep=args.sep,
            seed=args.seed,
            shuffle_labels=args.shuffle_labels,
        )
    else:
        ds = synth.make_xor(n=args.n)
    dataio.save_dataset(ds, args.out, args.format)
    print(f"wrote {args.kind} dataset: N={ds.n_samples} n={ds.n_features} -> {args.out}")
    return 0


def _cmd_train(args) -> int:
    ds = dataio.load_dataset(args.data)
    cfg = _model_config(args)
    if args.mode == "ensemble":
        model = ensemble_train(ds.x, ds.labels, ds.encoding, cfg, args.seed)
        save_ensemble(model, args.out)
    else:
        variant = {"elm_only": "ELM", "rvfl_only": "RVFL", "snn_only": "SNN"}[args.mode]
        y = encode_onehot(ds.labels, ds.encoding.m)
        model = train_variant(variant, ds.x, y, cfg)
        save_model(model, ds.encoding, args.out)
    print(f"trained {args.mode} on N={ds.n_samples} n={ds.n_features} -> {args.out}")
    return 0


def _cmd_predict(args) -> int:
    model, encoding = load_classifier(args.model)
    ds = dataio.load_dataset(args.data)
    expected = model.input_dim
    if ds.n_features != expected:
        raise ValueError(
            f"feature width mismatch: model expects n={expected}, dataset has n={ds.n_features}"
        )
    if isinstance(model, EnsembleModel):
        pred = ensemble_predict(model, ds.x)
    else:
        pred = predict_labels(model, ds.x)
    with open(args.out, "w") as fh:
        fh.write("index,predicted\n")
        for i, label in enumerate(pred):
            fh.write(f"{i},{encoding.class_names[label]}\n")
    print(f"wrote predictions for {ds.n_samples} samples -> {args.out}")
    if ds.encoding.m == 2 and ds.encoding.class_names == encoding.class_names:
        report = compute_metrics(confusion(ds.labels, pred, args.positive_class))
        print(_grid([("Metrics", report)]))
    return 0


def _cmd_cv(args) -> int:
    ds = dataio.load_dataset(args.data)
    cfg = ExperimentConfig(
        model=_model_config(args),
        k=args.folds,
        mode=args.mode,
        scale=not args.no_scale,
        master_seed=args.seed,
        positive_class=args.positive_class,
    )
    result = run_cv(ds, cfg)
    _print_cv_grid(result)
    if args.out:
        dataio.write_report_json(result, args.out, data_path=args.data)
        print(f"report -> {args.out}")
    if args.predictions:
        dataio.write_predictions_csv(result, ds, args.predictions)
        print(f"per-sample predictions -> {args.predictions}")
    per_fold = ", ".join(
        f"fold{i + 1} {t['scale_s'] + t['train_predict_s']:.2f}s"
        for i, t in enumerate(result.timings["folds"])
    )
    print(f"wall clock: {result.timings['total_s']:.2f}s total ({per_fold})")
    return 0


def _cmd_ablate(args) -> int:
    ds = dataio.load_dataset(args.data)
    base = ExperimentConfig(
        model=_model_config(args),
        k=args.folds,
        mode="ensemble",
        scale=not args.no_scale,
        master_seed=args.seed,
        positive_class=args.positive_class,
    )
    results = run_ablation(ds, base)
    print(_grid([(mode, results[mode].aggregate) for mode in ABLATION_MODES]))
    if args.out:
        dataio.write_ablation_json(results, args.out, data_path=args.data)
        print(f"report -> {args.out}")
    return 0


def _cmd_extract(args) -> int:
    exe = shutil.which(EXTRACTOR_EXECUTABLE)
    if exe is None:
        raise RuntimeError(
            f"extractor not installed: {EXTRACTOR_EXECUTABLE!r} not found on PATH "
            "(install the optional feature-extractor package to enable `extract`)"
        )
    cmd = [
        exe,
        "--images",
        args.images,
        "--out",
        args.out,
        "--format",
        args.format,
        "--batch-size",
        str(args.batch_size),
        "--epochs",
        str(args.epochs),
        "--lr",
        str(args.lr),
        "--seed",
        str(args.seed),
        "--on-error",
        args.on_error,
    ]
    if args.fine_tune:
        cmd.append("--fine-tune")
    completed = subprocess.run(cmd)
    return completed.returncode


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="randnet",
        description=(
            "Closed-form randomized networks (ELM/RVFL/SNN) with majority-vote "
            "ensembling over precomputed feature matrices."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a seeded synthetic dataset")
    p.add_argument("--kind", choices=("blobs", "xor"), required=True)
    p.add_argument("--n", type=_positive_int(2, "--n"), default=400, help="sample count (default: 400)")
    p.add_argument("--dim", type=_positive_int(1, "--dim"), default=20, help="feature count for blobs (default: 20)")
    p.add_argument("--sep", type=_nonneg_float("--sep"), default=4.0,
                   help="per-feature separation between blob class means (default: 4)")
    p.add_argument("--seed", type=_positive_int(0, "--seed", maximum=2**64 - 1), default=0, help="generator seed (default: 0)")
    p.add_argument("--shuffle-labels", action="store_true", help="permute labels (chance-level control)")
    p.add_argument("--out", required=True, help="output dataset path")
    p.add_argument("--format", choices=("csv", "rnf"), default="rnf", help="output format (default: rnf)")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("train", help="train a model on a full dataset file")
    p.add_argument("--data", required=True, help="dataset path (csv or rnf)")
    p.add_argument("--out", required=True, help="output model path (json)")
    p.add_argument("--mode", choices=MODES, default="ensemble", help="what to train (default: ensemble)")
    _add_model_flags(p)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("predict", help="predict labels for a dataset file")
    p.add_argument("--model", required=True, help="model path written by train")
    p.add_argument("--data", required=True, help="dataset path (csv or rnf)")
    p.add_argument("--out", required=True, help="output labels csv")
    p.add_argument("--positive-class", type=_positive_int(0, "--positive-class"), default=0,
                   help="class index treated as positive in metrics (default: 0)")
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("cv", help="stratified k-fold cross-validation")
    p.add_argument("--data", required=True, help="dataset path (csv or rnf)")
    p.add_argument("--out", help="write a JSON report here")
    p.add_argument("--predictions", help="write per-sample test predictions csv here")
    p.add_argument("--folds", type=_positive_int(2, "--folds"), default=5, help="fold count k (default: 5)")
    p.add_argument("--mode", choices=MODES, default="ensemble", help="ensemble or a single variant (default: ensemble)")
    p.add_argument("--no-scale", action="store_true", help="disable per-fold feature standardization")
    p.add_argument("--positive-class", type=_positive_int(0, "--positive-class"), default=0,
                   help="class index treated as positive in metrics (default: 0)")
    _add_model_flags(p)
    p.set_defaults(func=_cmd_cv)

    p = sub.add_parser("ablate", help="cross-validate every mode under one seed")
    p.add_argument("--data", required=True, help="dataset path (csv or rnf)")
    p.add_argument("--out", help="write a JSON report here")
    p.add_argument("--folds", type=_positive_int(2, "--folds"), default=5, help="fold count k (default: 5)")
    p.add_argument("--no-scale", action="store_true", help="disable per-fold feature standardization")
    p.add_argument("--positive-class", type=_positive_int(0, "--positive-class"), default=0,
                   help="class index treated as positive in metrics (default: 0)")
    _add_model_flags(p)
    p.set_defaults(func=_cmd_ablate)

    p = sub.add_parser(
        "extract",
        help="extract image features via the optional extractor package (subprocess)",
    )
    p.add_argument("--images", required=True, help="image directory with per-class subfolders")
    p.add_argument("--out", required=True, help="output dataset path")
    p.add_argument("--format", choices=("csv", "rnf"), default="rnf", help="output format (default: rnf)")
    p.add_argument("--fine-tune", action="store_true", help="fine-tune the backbone before extraction")
    p.add_argument("--epochs", type=_positive_int(1, "--epochs"), default=1, help="fine-tune epochs (clamped to 1)")
    p.add_argument("--batch-size", type=_positive_int(1, "--batch-size"), default=10, help="fine-tune mini-batch size (default: 10)")
    p.add_argument("--lr", type=_nonneg_float("--lr"), default=1e-4, help="fine-tune learning rate (default: 1e-4)")
    p.add_argument("--seed", type=_positive_int(0, "--seed", maximum=2**64 - 1), default=0, help="extractor seed (default: 0)")
    p.add_argument("--on-error", choices=("fail", "skip"), default="fail", help="undecodable image policy (default: fail)")
    p.set_defaults(func=_cmd_extract)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
