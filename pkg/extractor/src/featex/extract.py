"""Directory-to-dataset extraction, with optional one-epoch fine-tuning.

The image directory must hold one subfolder per class; subfolder names
become class names (sorted order) and rows follow sorted relative path
order regardless of execution order. A sidecar ``<out>.manifest.json``
records the run parameters, so a dataset file is always accompanied by
its provenance.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch
from torch import nn

from .backbone import POOLED_FEATURE_DIM, build_preprocess, decode_image, load_backbone
from .formats import write_dataset

MAX_EPOCHS = 1
IMAGE_SUFFIXES = {".png", ".jpg", ".jpeg", ".bmp", ".gif", ".tif", ".tiff"}


@dataclass
class ExtractorConfig:
    images_dir: Path
    out_path: Path
    fmt: str = "rnf"
    fine_tune: bool = False
    epochs: int = 1
    batch_size: int = 10
    learning_rate: float = 1e-4
    seed: int = 0
    on_error: str = "fail"  # or "skip": drop undecodable images with a warning
    weights: str = "auto"
    input_size: int = 224

    def __post_init__(self):
        self.images_dir = Path(self.images_dir)
        self.out_path = Path(self.out_path)
        if self.fmt not in ("csv", "rnf"):
            raise ValueError(f"unknown format {self.fmt!r}")
        if self.on_error not in ("fail", "skip"):
            raise ValueError(f"unknown on-error policy {self.on_error!r}")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.learning_rate < 0:
            raise ValueError("learning_rate must be >= 0")


def clamp_epochs(requested: int) -> int:
    """Fine-tuning never runs more than one epoch; higher requests clamp."""
    if requested < 1:
        raise ValueError("epochs must be >= 1")
    if requested > MAX_EPOCHS:
        warnings.warn(
            f"epochs={requested} requested; clamping to {MAX_EPOCHS} "
            "(single-epoch fine-tuning only)",
            RuntimeWarning,
            stacklevel=2,
        )
        return MAX_EPOCHS
    return requested


def scan_images(images_dir: Path) -> tuple[list[str], list[tuple[str, int]]]:
    """Class names (sorted) and (relative path, class index) entries in
    sorted path order."""
    images_dir = Path(images_dir)
    if not images_dir.is_dir():
        raise FileNotFoundError(f"image directory not found: {images_dir}")
    class_dirs = sorted(d for d in images_dir.iterdir() if d.is_dir())
    if len(class_dirs) < 2:
        raise ValueError(f"{images_dir}: need at least 2 class subfolders")
    class_names = [d.name for d in class_dirs]
    entries = []
    for idx, class_dir in enumerate(class_dirs):
        files = sorted(
            f for f in class_dir.iterdir()
            if f.is_file() and f.suffix.lower() in IMAGE_SUFFIXES
        )
        if not files:
            raise ValueError(f"class folder {class_dir} contains no images")
        entries.extend((str(f.relative_to(images_dir)), idx) for f in files)
    return class_names, entries


def _decode_entries(cfg: ExtractorConfig, entries, preprocess, skipped: list | None = None):
    """Yield (tensor, class index, relpath); apply the on-error policy.

    With ``on_error == "skip"`` undecodable paths are appended to the
    caller-supplied ``skipped`` list instead of aborting.
    """
    for relpath, label in entries:
        try:
            tensor = decode_image(cfg.images_dir / relpath, preprocess)
        except Exception as exc:
            if cfg.on_error == "fail":
                raise ValueError(f"cannot decode image {relpath}: {exc}") from exc
            warnings.warn(f"skipping undecodable image {relpath}: {exc}", RuntimeWarning)
            if skipped is not None:
                skipped.append(relpath)
            continue
        yield tensor, label, relpath


def _batched(iterable, size):
    batch = []
    for item in iterable:
        batch.append(item)
        if len(batch) == size:
            yield batch
            batch = []
    if batch:
        yield batch


def finetune_backbone(model: nn.Module, cfg: ExtractorConfig, entries, m: int) -> int:
    """One clamped epoch over a temporary linear head; returns the epoch
    count actually run. The head is dropped afterwards."""
    epochs = clamp_epochs(cfg.epochs)
    if len(entries) < cfg.batch_size:
        raise ValueError(
            f"insufficient images for one mini-batch: {len(entries)} < {cfg.batch_size}"
        )
    preprocess = build_preprocess(cfg.input_size)
    torch.manual_seed(cfg.seed)
    model.fc = nn.Linear(POOLED_FEATURE_DIM, m)
    model.train()
    optimizer = torch.optim.Adam(model.parameters(), lr=cfg.learning_rate)
    loss_fn = nn.CrossEntropyLoss()
    generator = torch.Generator().manual_seed(cfg.seed)
    for _ in range(epochs):
        order = torch.randperm(len(entries), generator=generator).tolist()
        shuffled = [entries[i] for i in order]
        for batch in _batched(_decode_entries(cfg, shuffled, preprocess), cfg.batch_size):
            x = torch.stack([t for t, _, _ in batch])
            y = torch.tensor([lab for _, lab, _ in batch])
            optimizer.zero_grad()
            loss_fn(model(x), y).backward()
            optimizer.step()
    model.fc = nn.Identity()
    model.eval()
    return epochs


def extract_features(cfg: ExtractorConfig) -> dict:
    """Run the pipeline and write the dataset plus its manifest.

    Returns the manifest dictionary. Frozen-backbone runs are
    deterministic across reruns on identical inputs.
    """
    class_names, entries = scan_images(cfg.images_dir)
    model, weights_used = load_backbone(cfg.weights, cfg.seed)
    epochs_run = 0
    if cfg.fine_tune:
        epochs_run = finetune_backbone(model, cfg, entries, len(class_names))

    preprocess = build_preprocess(cfg.input_size)
    rows: list[np.ndarray] = []
    labels: list[int] = []
    kept: list[str] = []
    skipped: list[str] = []
    decoder = _decode_entries(cfg, entries, preprocess, skipped)
    with torch.no_grad():
        for batch in _batched(decoder, cfg.batch_size):
            x = torch.stack([t for t, _, _ in batch])
            features = model(x).double().numpy()
            rows.append(features)
            labels.extend(lab for _, lab, _ in batch)
            kept.extend(rel for _, _, rel in batch)
    if not rows:
        raise ValueError("no decodable images found")
    features = np.vstack(rows)
    labels_arr = np.asarray(labels)
    present = np.unique(labels_arr)
    if present.size < len(class_names):
        missing = [class_names[i] for i in range(len(class_names)) if i not in present]
        raise ValueError(f"class(es) with no decodable images: {', '.join(missing)}")
    assert features.shape[1] == POOLED_FEATURE_DIM

    write_dataset(cfg.out_path, features, labels_arr, class_names, cfg.fmt)
    manifest = {
        "schema": "extractor-manifest/1",
        "backbone": "resnet50",
        "weights": weights_used,
        "feature_dim": int(features.shape[1]),
        "input_size": cfg.input_size,
        "fine_tune": cfg.fine_tune,
        "epochs_requested": cfg.epochs,
        "epochs_run": epochs_run,
        "batch_size": cfg.batch_size,
        "learning_rate": cfg.learning_rate,
        "seed": cfg.seed,
        "format": cfg.fmt,
        "samples": int(features.shape[0]),
        "classes": class_names,
        "class_counts": {
            class_names[i]: int(c) for i, c in enumerate(np.bincount(labels_arr))
        },
        "skipped": skipped,
    }
    manifest_path = Path(str(cfg.out_path) + ".manifest.json")
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n")
    return manifest
