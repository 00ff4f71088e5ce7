"""Seeded synthetic datasets for desk-scale benchmarks and tests."""

from __future__ import annotations

import numpy as np

from .dataio import FeatureDataset
from .models import LabelEncoding

__all__ = ["make_blobs", "make_xor"]

XOR_POINTS = np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]])
XOR_LABELS = np.array([0, 1, 1, 0])


def make_blobs(
    n: int = 400,
    dim: int = 20,
    sep: float = 4.0,
    seed: int = 0,
    shuffle_labels: bool = False,
) -> FeatureDataset:
    """Two unit-variance Gaussian clusters in ``dim`` dimensions.

    ``sep`` is the per-feature separation: class means sit ``sep`` apart
    along every axis ("neg" at -sep/2, "pos" at +sep/2), so the
    between-center distance is ``sep * sqrt(dim)`` and the Bayes error of
    the construction is essentially zero for sep >= 2.

    ``shuffle_labels`` permutes the labels after generation, destroying
    the class signal while keeping marginals; use it as a chance-level
    control.
    """
    if n < 2 or dim < 1:
        raise ValueError("need n >= 2 and dim >= 1")
    rng = np.random.default_rng(seed)
    n_neg = n // 2
    labels = np.array([0] * n_neg + [1] * (n - n_neg))
    x = rng.standard_normal((n, dim))
    x += np.where(labels[:, None] == 0, -sep / 2.0, sep / 2.0)
    order = rng.permutation(n)
    x, labels = x[order], labels[order]
    if shuffle_labels:
        labels = labels[rng.permutation(n)]
    return FeatureDataset(x=x, labels=labels, encoding=LabelEncoding(("neg", "pos")))


def make_xor(n: int = 4) -> FeatureDataset:
    """The 4-point XOR set in 2-D, cycled to ``n`` rows (no noise)."""
    if n < 4:
        raise ValueError("need n >= 4 to cover all four XOR corners")
    reps = np.arange(n) % 4
    return FeatureDataset(
        x=XOR_POINTS[reps],
        labels=XOR_LABELS[reps],
        encoding=LabelEncoding(("zero", "one")),
    )
