"""Writers for the two dataset formats the classifier toolkit consumes.

These implement the shared on-disk contract (kept intentionally free of
any import of the consumer package):

* CSV: header ``label,f0,...,f{n-1}``; label column holds class names;
  floats written with ``repr`` for an exact decimal round trip.
* RNF1 binary: magic ``RNF1``; little-endian u64 N, n, m; per class a
  u32 byte length plus UTF-8 name; N u32 labels; N*n f64 row-major
  features; trailing u32 CRC-32 of every preceding byte.
"""

from __future__ import annotations

import csv
import struct
import zlib
from pathlib import Path

import numpy as np

MAGIC = b"RNF1"


def _validate(features: np.ndarray, labels: np.ndarray, class_names) -> None:
    if features.ndim != 2 or features.shape[0] != labels.shape[0]:
        raise ValueError("features must be (N, n) with one label per row")
    if not np.isfinite(features).all():
        raise ValueError("features contain non-finite values")
    if len(class_names) < 2:
        raise ValueError("need at least 2 classes")
    if labels.min() < 0 or labels.max() >= len(class_names):
        raise ValueError("label index out of range")


def write_csv(path, features: np.ndarray, labels: np.ndarray, class_names) -> None:
    _validate(features, labels, class_names)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["label"] + [f"f{j}" for j in range(features.shape[1])])
        for label, row in zip(labels, features):
            writer.writerow([class_names[label]] + [repr(v) for v in row.tolist()])


def write_rnf(path, features: np.ndarray, labels: np.ndarray, class_names) -> None:
    _validate(features, labels, class_names)
    n_samples, n_features = features.shape
    payload = bytearray(MAGIC)
    payload += struct.pack("<QQQ", n_samples, n_features, len(class_names))
    for name in class_names:
        raw = name.encode("utf-8")
        payload += struct.pack("<I", len(raw))
        payload += raw
    payload += np.asarray(labels).astype("<u4").tobytes()
    payload += np.ascontiguousarray(features, dtype="<f8").tobytes()
    payload += struct.pack("<I", zlib.crc32(bytes(payload)) & 0xFFFFFFFF)
    Path(path).write_bytes(bytes(payload))


def write_dataset(path, features, labels, class_names, fmt: str) -> None:
    if fmt == "csv":
        write_csv(path, features, labels, class_names)
    elif fmt == "rnf":
        write_rnf(path, features, labels, class_names)
    else:
        raise ValueError(f"unknown dataset format {fmt!r}")
