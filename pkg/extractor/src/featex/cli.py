"""Standalone extraction CLI (also driven by `randnet extract` over a
subprocess with mirrored arguments)."""

from __future__ import annotations

import argparse
import sys

from .extract import ExtractorConfig, extract_features


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="featex",
        description=(
            "Extract 2048-wide pooled ResNet50 features from an image directory "
            "with one subfolder per class."
        ),
    )
    parser.add_argument("--images", required=True, help="image directory with per-class subfolders")
    parser.add_argument("--out", required=True, help="output dataset path")
    parser.add_argument("--format", choices=("csv", "rnf"), default="rnf", help="output format (default: rnf)")
    parser.add_argument("--fine-tune", action="store_true", help="fine-tune the backbone before extraction (one epoch)")
    parser.add_argument("--epochs", type=int, default=1, help="fine-tune epochs; values above 1 clamp to 1")
    parser.add_argument("--batch-size", type=int, default=10, help="mini-batch size (default: 10)")
    parser.add_argument("--lr", type=float, default=1e-4, help="fine-tune learning rate (default: 1e-4)")
    parser.add_argument("--seed", type=int, default=0, help="seed for fine-tuning and random-init fallback (default: 0)")
    parser.add_argument("--on-error", choices=("fail", "skip"), default="fail", help="undecodable image policy (default: fail)")
    parser.add_argument("--weights", choices=("auto", "imagenet", "random"), default="auto",
                        help="backbone weights: pretrained, seeded random, or auto fallback (default: auto)")
    parser.add_argument("--input-size", type=int, default=224, help="square input resolution fed to the backbone (default: 224)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = ExtractorConfig(
            images_dir=args.images,
            out_path=args.out,
            fmt=args.format,
            fine_tune=args.fine_tune,
            epochs=args.epochs,
            batch_size=args.batch_size,
            learning_rate=args.lr,
            seed=args.seed,
            on_error=args.on_error,
            weights=args.weights,
            input_size=args.input_size,
        )
        manifest = extract_features(cfg)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(
        f"wrote {manifest['samples']} x {manifest['feature_dim']} features "
        f"({manifest['weights']} weights) -> {args.out}"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
