"""Dataset and report persistence.

Two dataset formats carry the same content:

* CSV, for inspectability: header ``label,f0,...,f{n-1}``; the label
  column holds class names, collected in first-appearance order; floats
  are written with ``repr`` and therefore survive the decimal round trip
  exactly.
* ``RNF1`` binary, for bulk feature matrices, bit-exact by construction:

  =========  =============================================================
  bytes      meaning
  =========  =============================================================
  4          magic ``RNF1``
  3 x u64    N (samples), n (features), m (classes), little-endian
  per class  u32 byte length + UTF-8 class name
  N x u32    labels (class indices), little-endian
  N*n x f64  features, row-major, little-endian IEEE-754
  u32        CRC-32 (zlib) of every preceding byte, little-endian
  =========  =============================================================

Loaders reject malformed input with a typed error; they never silently
truncate.
"""

from __future__ import annotations

import csv
import json
import struct
import zlib
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import TYPE_CHECKING

import numpy as np

from .linalg import as_matrix
from .metrics import METRIC_FIELDS
from .models import LabelEncoding

if TYPE_CHECKING:  # avoids a runtime import cycle with cv
    from .cv import CvResult

__all__ = [
    "FormatError",
    "BadMagicError",
    "TruncatedFileError",
    "ChecksumError",
    "DatasetManifest",
    "FeatureDataset",
    "save_features_csv",
    "load_features_csv",
    "save_features_binary",
    "load_features_binary",
    "save_dataset",
    "load_dataset",
    "peek_manifest",
    "report_to_dict",
    "write_report_json",
    "ablation_to_dict",
    "write_ablation_json",
    "write_predictions_csv",
]

MAGIC = b"RNF1"
BINARY_FORMAT_VERSION = 1


class FormatError(ValueError):
    """A dataset file violates its format."""


class BadMagicError(FormatError):
    """The file does not start with the RNF1 magic bytes."""


class TruncatedFileError(FormatError):
    """The file ends before its declared content."""


class ChecksumError(FormatError):
    """The payload does not match its trailing checksum."""


@dataclass(frozen=True)
class DatasetManifest:
    format_version: int
    n_samples: int
    n_features: int
    class_names: tuple[str, ...]
    checksum: int | None  # None for CSV, which carries no checksum


@dataclass(eq=False)
class FeatureDataset:
    """Feature matrix (N, n) with per-row class indices and a name table."""

    x: np.ndarray
    labels: np.ndarray
    encoding: LabelEncoding
    source: list[tuple[str, str]] | None = None

    def __post_init__(self):
        self.x = as_matrix(self.x, "features")
        self.labels = np.asarray(self.labels)
        if self.labels.ndim != 1 or self.labels.shape[0] != self.x.shape[0]:
            raise ValueError("labels length must equal the number of feature rows")
        if self.labels.dtype.kind not in "iu":
            raise ValueError("labels must be integers")
        if self.labels.min() < 0 or self.labels.max() >= self.encoding.m:
            raise ValueError("label index out of range for the class table")
        self.labels = self.labels.astype(np.int64)

    @property
    def n_samples(self) -> int:
        return self.x.shape[0]

    @property
    def n_features(self) -> int:
        return self.x.shape[1]


# --- CSV --------------------------------------------------------------------


def save_features_csv(ds: FeatureDataset, path) -> None:
    names = ds.encoding.class_names
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["label"] + [f"f{j}" for j in range(ds.n_features)])
        for label, row in zip(ds.labels, ds.x):
            writer.writerow([names[label]] + [repr(v) for v in row.tolist()])


def load_features_csv(path) -> FeatureDataset:
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise FormatError(f"{path}: empty file, expected a header row") from None
        n = len(header) - 1
        if n < 1 or header[0] != "label" or header[1:] != [f"f{j}" for j in range(n)]:
            raise FormatError(
                f"{path}: line 1: unknown header, expected label,f0,...,f{{n-1}}"
            )
        name_to_index: dict[str, int] = {}
        labels: list[int] = []
        rows: list[list[float]] = []
        for record in reader:
            line = reader.line_num
            if len(record) != n + 1:
                raise FormatError(
                    f"{path}: line {line}: ragged row with {len(record)} fields, expected {n + 1}"
                )
            name = record[0]
            if name not in name_to_index:
                name_to_index[name] = len(name_to_index)
            labels.append(name_to_index[name])
            try:
                values = [float(tok) for tok in record[1:]]
            except ValueError as exc:
                raise FormatError(f"{path}: line {line}: non-numeric feature: {exc}") from None
            if not all(map(np.isfinite, values)):
                raise FormatError(f"{path}: line {line}: non-finite feature value")
            rows.append(values)
        if not rows:
            raise FormatError(f"{path}: no data rows")
        if len(name_to_index) < 2:
            raise FormatError(f"{path}: fewer than 2 classes present")
    return FeatureDataset(
        x=np.asarray(rows, dtype=np.float64),
        labels=np.asarray(labels, dtype=np.int64),
        encoding=LabelEncoding(tuple(name_to_index)),
    )


# --- RNF1 binary ------------------------------------------------------------


class _Cursor:
    def __init__(self, data: bytes, path: Path):
        self.data = data
        self.path = path
        self.pos = 0

    def take(self, nbytes: int, what: str) -> bytes:
        end = self.pos + nbytes
        if end > len(self.data):
            raise TruncatedFileError(f"{self.path}: truncated while reading {what}")
        chunk = self.data[self.pos : end]
        self.pos = end
        return chunk


def save_features_binary(ds: FeatureDataset, path) -> None:
    payload = bytearray(MAGIC)
    payload += struct.pack(
        "<QQQ", ds.n_samples, ds.n_features, ds.encoding.m
    )
    for name in ds.encoding.class_names:
        raw = name.encode("utf-8")
        payload += struct.pack("<I", len(raw))
        payload += raw
    payload += ds.labels.astype("<u4").tobytes()
    payload += np.ascontiguousarray(ds.x, dtype="<f8").tobytes()
    payload += struct.pack("<I", zlib.crc32(bytes(payload)) & 0xFFFFFFFF)
    Path(path).write_bytes(bytes(payload))


def _parse_binary(data: bytes, path: Path) -> tuple[FeatureDataset, DatasetManifest]:
    cur = _Cursor(data, path)
    if cur.take(4, "magic") != MAGIC:
        raise BadMagicError(f"{path}: not an RNF1 file")
    n_samples, n_features, m = struct.unpack("<QQQ", cur.take(24, "header counts"))
    if n_samples < 1 or n_features < 1 or m < 2:
        raise FormatError(
            f"{path}: invalid header counts N={n_samples} n={n_features} m={m}"
        )
    names = []
    for i in range(m):
        (length,) = struct.unpack("<I", cur.take(4, f"class name {i} length"))
        names.append(cur.take(length, f"class name {i}").decode("utf-8"))
    labels = np.frombuffer(
        cur.take(4 * n_samples, "labels"), dtype="<u4"
    ).astype(np.int64)
    features = np.frombuffer(
        cur.take(8 * n_samples * n_features, "features"), dtype="<f8"
    ).reshape(n_samples, n_features)
    (stored,) = struct.unpack("<I", cur.take(4, "checksum"))
    if cur.pos != len(data):
        raise FormatError(f"{path}: {len(data) - cur.pos} trailing bytes after checksum")
    computed = zlib.crc32(data[:-4]) & 0xFFFFFFFF
    if stored != computed:
        raise ChecksumError(
            f"{path}: checksum mismatch (stored {stored:#010x}, computed {computed:#010x})"
        )
    if labels.max(initial=0) >= m:
        raise FormatError(f"{path}: label index out of range for m={m}")
    ds = FeatureDataset(
        x=features.astype(np.float64),
        labels=labels,
        encoding=LabelEncoding(tuple(names)),
    )
    manifest = DatasetManifest(
        format_version=BINARY_FORMAT_VERSION,
        n_samples=int(n_samples),
        n_features=int(n_features),
        class_names=tuple(names),
        checksum=stored,
    )
    return ds, manifest


def load_features_binary(path) -> FeatureDataset:
    path = Path(path)
    ds, _ = _parse_binary(path.read_bytes(), path)
    return ds


def peek_manifest(path) -> DatasetManifest:
    """Parse and checksum-verify a dataset file, returning its manifest."""
    path = Path(path)
    data = path.read_bytes()
    if data[:4] == MAGIC:
        _, manifest = _parse_binary(data, path)
        return manifest
    ds = load_features_csv(path)
    return DatasetManifest(
        format_version=1,
        n_samples=ds.n_samples,
        n_features=ds.n_features,
        class_names=ds.encoding.class_names,
        checksum=None,
    )


def save_dataset(ds: FeatureDataset, path, fmt: str) -> None:
    if fmt == "csv":
        save_features_csv(ds, path)
    elif fmt == "rnf":
        save_features_binary(ds, path)
    else:
        raise ValueError(f"unknown dataset format {fmt!r}")


def load_dataset(path) -> FeatureDataset:
    """Load either format, dispatching on content (RNF1 magic) not extension."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"dataset file not found: {path}")
    with open(path, "rb") as fh:
        head = fh.read(4)
    if head == MAGIC:
        return load_features_binary(path)
    return load_features_csv(path)


# --- reports ----------------------------------------------------------------


def _metric_dict(report) -> dict:
    return {name: getattr(report, name) for name in METRIC_FIELDS}


def _display_dict(report) -> dict:
    return {
        name: None if getattr(report, name) is None else f"{getattr(report, name):.4f}"
        for name in METRIC_FIELDS
    }


def report_to_dict(result: "CvResult", data_path=None) -> dict:
    """JSON-ready document for one cross-validation run.

    Deterministic by construction: fixed key order, no timestamps, floats
    at full repr precision plus 4-decimal display strings.
    """
    cfg = result.config
    folds = []
    for i, (cm, rep) in enumerate(zip(result.fold_confusions, result.fold_reports)):
        folds.append(
            {
                "fold": i + 1,
                "test_size": cm.total,
                "confusion": asdict(cm),
                "metrics": _metric_dict(rep),
                "display": _display_dict(rep),
            }
        )
    return {
        "schema": "cv-report/1",
        "config": {
            "data": None if data_path is None else str(data_path),
            "k": cfg.k,
            "mode": cfg.mode,
            "scale": cfg.scale,
            "master_seed": cfg.master_seed,
            "positive_class": cfg.positive_class,
            "model": asdict(cfg.model),
        },
        "dataset": {
            "samples": result.n_samples,
            "features": result.n_features,
            "classes": list(result.class_names),
        },
        "seeds": {
            "master": cfg.master_seed,
            "fold_plan": result.plan.seed,
            "fold_models": list(result.fold_model_seeds),
        },
        "folds": folds,
        "aggregate": {
            "metrics": _metric_dict(result.aggregate),
            "display": _display_dict(result.aggregate),
        },
    }


def write_report_json(result: "CvResult", path, data_path=None) -> None:
    try:
        Path(path).write_text(json.dumps(report_to_dict(result, data_path), indent=2) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc}") from exc


def ablation_to_dict(results: dict, data_path=None) -> dict:
    return {
        "schema": "ablation-report/1",
        "modes": list(results),
        "results": {mode: report_to_dict(res, data_path) for mode, res in results.items()},
    }


def write_ablation_json(results: dict, path, data_path=None) -> None:
    try:
        Path(path).write_text(json.dumps(ablation_to_dict(results, data_path), indent=2) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc}") from exc


def write_predictions_csv(result: "CvResult", ds: FeatureDataset, path) -> None:
    """Per-sample test-fold predictions, for post-hoc recombination checks."""
    names = ds.encoding.class_names
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "fold", "true", "predicted"])
        for i in range(ds.n_samples):
            writer.writerow(
                [
                    i,
                    int(result.plan.assignments[i]) + 1,
                    names[ds.labels[i]],
                    names[result.predictions[i]],
                ]
            )
