"""Binary confusion-matrix accounting and the five derived scores.

Any score whose denominator is zero is reported as ``None`` (never NaN
and never a silent 0), and fold averaging refuses to mix defined and
undefined values for the same metric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "METRIC_FIELDS",
    "ConfusionMatrix",
    "MetricsReport",
    "confusion",
    "compute_metrics",
    "aggregate_folds",
]

METRIC_FIELDS = ("accuracy", "sensitivity", "precision", "specificity", "f1")


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    tn: int
    fp: int
    fn: int
    positive_class: int

    def __post_init__(self):
        if min(self.tp, self.tn, self.fp, self.fn) < 0:
            raise ValueError("confusion counts must be nonnegative")

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn


@dataclass(frozen=True)
class MetricsReport:
    """Five scores in [0, 1]; ``None`` marks an undefined (0/0) value."""

    accuracy: float | None
    sensitivity: float | None
    precision: float | None
    specificity: float | None
    f1: float | None

    def __post_init__(self):
        for name in METRIC_FIELDS:
            value = getattr(self, name)
            if value is not None and not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")


def confusion(y_true, y_pred, positive_class: int) -> ConfusionMatrix:
    """Count tp/tn/fp/fn for a binary task with the given positive class."""
    t = np.asarray(y_true)
    p = np.asarray(y_pred)
    if t.ndim != 1 or t.shape != p.shape:
        raise ValueError("label vectors must be 1-D and the same length")
    true_pos = t == positive_class
    pred_pos = p == positive_class
    return ConfusionMatrix(
        tp=int(np.sum(true_pos & pred_pos)),
        tn=int(np.sum(~true_pos & ~pred_pos)),
        fp=int(np.sum(~true_pos & pred_pos)),
        fn=int(np.sum(true_pos & ~pred_pos)),
        positive_class=int(positive_class),
    )


def _ratio(num: int, den: int) -> float | None:
    return num / den if den else None


def compute_metrics(c: ConfusionMatrix) -> MetricsReport:
    """Accuracy, sensitivity, precision, specificity, and F1 from counts.

    F1 is ``2·tp / (2·tp + fp + fn)``, the harmonic mean of precision and
    sensitivity whenever all three are defined.
    """
    if c.total < 1:
        raise ValueError("confusion matrix is empty")
    return MetricsReport(
        accuracy=(c.tp + c.tn) / c.total,
        sensitivity=_ratio(c.tp, c.tp + c.fn),
        precision=_ratio(c.tp, c.tp + c.fp),
        specificity=_ratio(c.tn, c.tn + c.fp),
        f1=_ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn),
    )


def aggregate_folds(reports) -> MetricsReport:
    """Unweighted arithmetic mean of per-fold reports, metric by metric.

    Every fold must agree on which metrics are defined; ``None`` entries
    stay ``None`` in the aggregate rather than polluting the mean as 0.
    """
    reports = list(reports)
    if not reports:
        raise ValueError("no fold reports to aggregate")
    values = {}
    for name in METRIC_FIELDS:
        column = [getattr(r, name) for r in reports]
        defined = [v is not None for v in column]
        if any(defined) and not all(defined):
            raise ValueError(f"metric {name!r} is defined in some folds but not others")
        values[name] = math.fsum(column) / len(column) if all(defined) else None
    return MetricsReport(**values)
