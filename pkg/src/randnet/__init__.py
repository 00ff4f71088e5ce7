"""Closed-form randomized networks, majority-vote ensembling, CV harness."""

from .cv import (
    CvResult,
    ExperimentConfig,
    FoldPlan,
    Scaler,
    apply_scaler,
    derive_seed,
    fit_scaler,
    run_ablation,
    run_cv,
    stratified_folds,
)
from .dataio import (
    FeatureDataset,
    load_dataset,
    load_features_binary,
    load_features_csv,
    save_features_binary,
    save_features_csv,
    write_report_json,
)
from .ensemble import (
    EnsembleModel,
    ensemble_predict,
    ensemble_train,
    load_ensemble,
    majority_vote,
    save_ensemble,
)
from .linalg import NumericalError, SvdFactors, as_matrix, pseudo_inverse, solve_min_norm, svd
from .metrics import ConfusionMatrix, MetricsReport, aggregate_folds, compute_metrics, confusion
from .models import (
    LabelEncoding,
    ModelConfig,
    RandomLayer,
    RnnModel,
    encode_onehot,
    hidden_map,
    init_random_layer,
    load_model,
    predict_labels,
    predict_scores,
    save_model,
    train_elm,
    train_rvfl,
    train_snn,
)
from .synth import make_blobs, make_xor

__version__ = "0.1.0"
