"""Stratified k-fold cross-validation harness.

Seeding is split into independent streams derived from one master seed so
that changing ``k`` never perturbs model initialization:

* fold plan:            ``derive_seed(master_seed, 0)``
* fold ``f`` model base: ``derive_seed(master_seed, f + 1)``
* member ``i`` of fold ``f``: model base ``+ i`` (ELM, RVFL, SNN order)

Single-variant modes reuse the exact member seed the ensemble would use,
so an ``elm_only`` run reproduces the ensemble's ELM member prediction
for prediction, fold for fold.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace

import numpy as np

from .dataio import FeatureDataset
from .ensemble import ensemble_predict, ensemble_train, member_seeds
from .linalg import as_matrix
from .metrics import ConfusionMatrix, MetricsReport, aggregate_folds, compute_metrics, confusion
from .models import SEED_MODULUS, VARIANTS, ModelConfig, encode_onehot, predict_labels, train_variant

__all__ = [
    "MODES",
    "ABLATION_MODES",
    "FoldPlan",
    "Scaler",
    "ExperimentConfig",
    "CvResult",
    "derive_seed",
    "stratified_folds",
    "fit_scaler",
    "apply_scaler",
    "run_cv",
    "run_ablation",
]

MODES = ("ensemble", "elm_only", "rvfl_only", "snn_only")
ABLATION_MODES = ("elm_only", "rvfl_only", "snn_only", "ensemble")

_MODE_VARIANT = {"elm_only": "ELM", "rvfl_only": "RVFL", "snn_only": "SNN"}
_MASK64 = (1 << 64) - 1


def derive_seed(master_seed: int, stream: int) -> int:
    """Deterministic 64-bit sub-seed: SplitMix64 finalizer applied to the
    master seed advanced ``stream + 1`` steps along the golden-gamma line."""
    x = (master_seed + (stream + 1) * 0x9E3779B97F4A7C15) & _MASK64
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & _MASK64
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


@dataclass(frozen=True, eq=False)
class FoldPlan:
    """Per-sample fold assignment in [0, k)."""

    k: int
    assignments: np.ndarray
    seed: int

    def test_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments == fold)

    def train_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments != fold)


def stratified_folds(labels, k: int, seed: int) -> FoldPlan:
    """Deterministic stratified assignment.

    Samples are shuffled within each class and dealt to folds by one
    round-robin pointer that runs on across classes, so per-class fold
    counts and total fold sizes both differ by at most 1.
    """
    labels = np.asarray(labels)
    if labels.ndim != 1 or labels.size == 0:
        raise ValueError("labels must be a nonempty 1-D sequence")
    if k < 2:
        raise ValueError("k must be >= 2")
    classes, counts = np.unique(labels, return_counts=True)
    small = classes[counts < k]
    if small.size:
        raise ValueError(
            f"stratification infeasible: class {small[0]} has "
            f"{int(counts[classes == small[0]][0])} samples, fewer than k={k}"
        )
    rng = np.random.default_rng(seed)
    assignments = np.empty(labels.size, dtype=np.int64)
    pointer = 0
    for c in classes:
        idx = rng.permutation(np.flatnonzero(labels == c))
        assignments[idx] = (pointer + np.arange(idx.size)) % k
        pointer += idx.size
    return FoldPlan(k=k, assignments=assignments, seed=seed)


@dataclass(frozen=True, eq=False)
class Scaler:
    """Per-feature standardization statistics, fit on training rows only."""

    mean: np.ndarray
    std: np.ndarray
    enabled: bool = True


def fit_scaler(x_train, enabled: bool = True) -> Scaler:
    x = as_matrix(x_train, "x_train")
    if x.shape[0] < 2:
        raise ValueError("scaler must be fit on at least 2 rows")
    return Scaler(mean=x.mean(axis=0), std=x.std(axis=0), enabled=enabled)


def apply_scaler(scaler: Scaler, x) -> np.ndarray:
    """Standardize with the stored statistics; zero-variance features map to 0."""
    x = as_matrix(x, "x")
    if not scaler.enabled:
        return x
    if x.shape[1] != scaler.mean.shape[0]:
        raise ValueError(
            f"feature width {x.shape[1]} does not match scaler width {scaler.mean.shape[0]}"
        )
    denom = np.where(scaler.std == 0.0, 1.0, scaler.std)
    return (x - scaler.mean) / denom


@dataclass(frozen=True)
class ExperimentConfig:
    """One cross-validation experiment."""

    model: ModelConfig = field(default_factory=ModelConfig)
    k: int = 5
    mode: str = "ensemble"
    scale: bool = True
    master_seed: int = 0
    positive_class: int = 0

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("k must be >= 2")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if not 0 <= self.master_seed < SEED_MODULUS:
            raise ValueError("master_seed must be an unsigned 64-bit integer")
        if self.positive_class < 0:
            raise ValueError("positive_class must be a class index")


@dataclass(eq=False)
class CvResult:
    config: ExperimentConfig
    plan: FoldPlan
    fold_model_seeds: tuple[int, ...]
    class_names: tuple[str, ...]
    n_samples: int
    n_features: int
    fold_confusions: list[ConfusionMatrix]
    fold_reports: list[MetricsReport]
    aggregate: MetricsReport
    predictions: np.ndarray  # every sample predicted once, in its test fold
    timings: dict


def _train_and_predict(mode, x_train, labels_train, encoding, model_cfg, fold_seed, x_test):
    if mode == "ensemble":
        model = ensemble_train(x_train, labels_train, encoding, model_cfg, fold_seed)
        return ensemble_predict(model, x_test)
    variant = _MODE_VARIANT[mode]
    seed = member_seeds(fold_seed)[VARIANTS.index(variant)]
    y = encode_onehot(labels_train, encoding.m)
    model = train_variant(variant, x_train, y, replace(model_cfg, seed=seed))
    return predict_labels(model, x_test)


def run_cv(dataset: FeatureDataset, cfg: ExperimentConfig) -> CvResult:
    """Train and evaluate per fold; every sample is tested exactly once.

    Scaler statistics come from the training rows of each fold only.
    Deterministic given (dataset, config); fold failures abort the run
    with the fold index attached.
    """
    if cfg.positive_class >= dataset.encoding.m:
        raise ValueError(
            f"positive_class {cfg.positive_class} out of range for m={dataset.encoding.m}"
        )
    t_start = time.perf_counter()
    plan = stratified_folds(dataset.labels, cfg.k, derive_seed(cfg.master_seed, 0))
    fold_seeds = tuple(derive_seed(cfg.master_seed, f + 1) for f in range(cfg.k))

    predictions = np.full(dataset.n_samples, -1, dtype=np.int64)
    fold_confusions: list[ConfusionMatrix] = []
    fold_reports: list[MetricsReport] = []
    fold_times = []
    for f in range(cfg.k):
        t0 = time.perf_counter()
        try:
            test_idx = plan.test_indices(f)
            train_idx = plan.train_indices(f)
            scaler = fit_scaler(dataset.x[train_idx], enabled=cfg.scale)
            x_train = apply_scaler(scaler, dataset.x[train_idx])
            x_test = apply_scaler(scaler, dataset.x[test_idx])
            t1 = time.perf_counter()
            fold_pred = _train_and_predict(
                cfg.mode,
                x_train,
                dataset.labels[train_idx],
                dataset.encoding,
                cfg.model,
                fold_seeds[f],
                x_test,
            )
        except Exception as exc:
            raise RuntimeError(f"cross-validation fold {f} failed: {exc}") from exc
        t2 = time.perf_counter()
        predictions[test_idx] = fold_pred
        cm = confusion(dataset.labels[test_idx], fold_pred, cfg.positive_class)
        fold_confusions.append(cm)
        fold_reports.append(compute_metrics(cm))
        fold_times.append({"scale_s": t1 - t0, "train_predict_s": t2 - t1})

    assert not np.any(predictions < 0), "some sample was never tested"
    return CvResult(
        config=cfg,
        plan=plan,
        fold_model_seeds=fold_seeds,
        class_names=dataset.encoding.class_names,
        n_samples=dataset.n_samples,
        n_features=dataset.n_features,
        fold_confusions=fold_confusions,
        fold_reports=fold_reports,
        aggregate=aggregate_folds(fold_reports),
        predictions=predictions,
        timings={"folds": fold_times, "total_s": time.perf_counter() - t_start},
    )


def run_ablation(dataset: FeatureDataset, base_cfg: ExperimentConfig) -> dict[str, CvResult]:
    """One CvResult per mode, all under the same master seed.

    Because member seeds match across modes, the ensemble row can be
    reconstructed from the three single-variant rows' per-sample
    predictions by majority vote.
    """
    return {
        mode: run_cv(dataset, replace(base_cfg, mode=mode)) for mode in ABLATION_MODES
    }
