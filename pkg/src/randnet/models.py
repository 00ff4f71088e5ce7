"""Randomized single-hidden-layer networks trained in closed form.

The three variants share one recipe: draw a fixed random hidden layer,
push the inputs through an activation, and obtain the output weights with
a single minimum-norm least-squares solve.

* ``ELM``  reads hidden activations only; ``p`` has shape (H, m).
* ``RVFL`` adds a direct link, solving on ``[x | hidden]`` (input features
  first); ``p`` has shape (n+H, m).
* ``SNN``  learns an output bias jointly by augmenting the hidden matrix
  with a trailing ones column; ``p`` has shape (H, m) plus a bias ``e`` of
  length m.

Hidden weights and biases are never stored on disk: they regenerate
bit-for-bit from ``(seed, distribution, n, H)``, which is all the model
document carries besides the solved output weights.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .linalg import as_matrix, solve_min_norm

__all__ = [
    "ACTIVATIONS",
    "DISTRIBUTIONS",
    "VARIANTS",
    "ModelConfig",
    "RandomLayer",
    "LabelEncoding",
    "RnnModel",
    "init_random_layer",
    "hidden_map",
    "encode_onehot",
    "train_elm",
    "train_rvfl",
    "train_snn",
    "train_variant",
    "predict_scores",
    "predict_labels",
    "model_to_dict",
    "model_from_dict",
    "save_model",
    "load_model",
]

SEED_MODULUS = 2**64

DISTRIBUTIONS = ("uniform_pm1", "gaussian01")
VARIANTS = ("ELM", "RVFL", "SNN")


def _sigmoid(x: np.ndarray) -> np.ndarray:
    # Piecewise form avoids exp overflow for large negative inputs.
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


ACTIVATIONS = {
    "sigmoid": _sigmoid,
    "tanh": np.tanh,
    "relu": lambda x: np.maximum(x, 0.0),
}


@dataclass(frozen=True)
class ModelConfig:
    """Hyperparameters of one randomized network."""

    hidden_nodes: int = 400
    activation: str = "sigmoid"
    distribution: str = "uniform_pm1"
    seed: int = 0
    ridge_lambda: float = 0.0

    def __post_init__(self):
        if self.hidden_nodes < 1:
            raise ValueError("hidden_nodes must be >= 1")
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"unknown activation {self.activation!r}")
        if self.distribution not in DISTRIBUTIONS:
            raise ValueError(f"unknown distribution {self.distribution!r}")
        if not 0 <= self.seed < SEED_MODULUS:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.ridge_lambda < 0:
            raise ValueError("ridge_lambda must be >= 0")


@dataclass(frozen=True, eq=False)
class RandomLayer:
    """Fixed hidden layer: weights ``w`` (H, n) and biases ``b`` (H,)."""

    w: np.ndarray
    b: np.ndarray
    seed: int
    distribution: str

    def __post_init__(self):
        if self.w.ndim != 2 or self.b.ndim != 1 or self.w.shape[0] != self.b.shape[0]:
            raise ValueError("layer shapes inconsistent: w must be (H, n), b (H,)")

    @property
    def hidden_nodes(self) -> int:
        return self.w.shape[0]

    @property
    def input_dim(self) -> int:
        return self.w.shape[1]


@dataclass(frozen=True)
class LabelEncoding:
    """Ordered class-name table; class index == position."""

    class_names: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "class_names", tuple(self.class_names))
        if len(self.class_names) < 2:
            raise ValueError("need at least 2 classes")
        if len(set(self.class_names)) != len(self.class_names):
            raise ValueError("class names must be distinct")

    @property
    def m(self) -> int:
        return len(self.class_names)


@dataclass(frozen=True, eq=False)
class RnnModel:
    """One trained network: variant tag, frozen layer, solved output weights."""

    variant: str
    layer: RandomLayer
    activation: str
    p: np.ndarray
    e: np.ndarray | None
    input_dim: int
    class_count: int

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        h = self.layer.hidden_nodes
        expect_rows = self.input_dim + h if self.variant == "RVFL" else h
        if self.p.shape != (expect_rows, self.class_count):
            raise ValueError(
                f"{self.variant} output weights must be "
                f"({expect_rows}, {self.class_count}), got {self.p.shape}"
            )
        if self.variant == "SNN":
            if self.e is None or self.e.shape != (self.class_count,):
                raise ValueError("SNN requires an output bias of length m")
        elif self.e is not None:
            raise ValueError(f"{self.variant} carries no output bias")


def init_random_layer(n: int, cfg: ModelConfig) -> RandomLayer:
    """Draw the fixed hidden layer.

    Deterministic: identical ``(seed, distribution, n, H)`` reproduce the
    layer bit-for-bit. ``w`` is drawn first, then ``b``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(cfg.seed)
    shape = (cfg.hidden_nodes, n)
    if cfg.distribution == "uniform_pm1":
        w = rng.uniform(-1.0, 1.0, size=shape)
        b = rng.uniform(-1.0, 1.0, size=cfg.hidden_nodes)
    else:
        w = rng.standard_normal(shape)
        b = rng.standard_normal(cfg.hidden_nodes)
    return RandomLayer(w=w, b=b, seed=cfg.seed, distribution=cfg.distribution)


def hidden_map(x, layer: RandomLayer, activation: str) -> np.ndarray:
    """Hidden activations ``g(x @ wᵀ + b)``, one row per sample."""
    x = as_matrix(x, "x")
    if x.shape[1] != layer.input_dim:
        raise ValueError(
            f"feature width {x.shape[1]} does not match layer input_dim {layer.input_dim}"
        )
    g = ACTIVATIONS[activation]
    return g(x @ layer.w.T + layer.b)


def encode_onehot(labels, m: int) -> np.ndarray:
    """One-hot target matrix (N, m); row i is 1.0 at column ``labels[i]``."""
    arr = np.asarray(labels)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("labels must be a nonempty 1-D sequence")
    if arr.dtype.kind not in "iu":
        raise ValueError("labels must be integers")
    if arr.min() < 0 or arr.max() >= m:
        raise ValueError(f"label out of range [0, {m})")
    out = np.zeros((arr.size, m))
    out[np.arange(arr.size), arr] = 1.0
    return out


def _training_pair(x, y_onehot):
    x = as_matrix(x, "x")
    y = as_matrix(y_onehot, "y_onehot")
    if x.shape[0] != y.shape[0]:
        raise ValueError(f"sample mismatch: x has {x.shape[0]} rows, y has {y.shape[0]}")
    return x, y


def train_elm(x, y_onehot, cfg: ModelConfig) -> RnnModel:
    """Closed-form training on hidden activations alone."""
    x, y = _training_pair(x, y_onehot)
    layer = init_random_layer(x.shape[1], cfg)
    hidden = hidden_map(x, layer, cfg.activation)
    p = solve_min_norm(hidden, y, ridge=cfg.ridge_lambda)
    return RnnModel(
        variant="ELM",
        layer=layer,
        activation=cfg.activation,
        p=p,
        e=None,
        input_dim=x.shape[1],
        class_count=y.shape[1],
    )


def train_rvfl(x, y_onehot, cfg: ModelConfig) -> RnnModel:
    """Closed-form training on ``[x | hidden]`` (direct link first)."""
    x, y = _training_pair(x, y_onehot)
    layer = init_random_layer(x.shape[1], cfg)
    hidden = hidden_map(x, layer, cfg.activation)
    design = np.hstack([x, hidden])
    p = solve_min_norm(design, y, ridge=cfg.ridge_lambda)
    return RnnModel(
        variant="RVFL",
        layer=layer,
        activation=cfg.activation,
        p=p,
        e=None,
        input_dim=x.shape[1],
        class_count=y.shape[1],
    )


def train_snn(x, y_onehot, cfg: ModelConfig) -> RnnModel:
    """Joint solve of output weights and bias via a trailing ones column."""
    x, y = _training_pair(x, y_onehot)
    layer = init_random_layer(x.shape[1], cfg)
    hidden = hidden_map(x, layer, cfg.activation)
    design = np.hstack([hidden, np.ones((x.shape[0], 1))])
    solution = solve_min_norm(design, y, ridge=cfg.ridge_lambda)
    return RnnModel(
        variant="SNN",
        layer=layer,
        activation=cfg.activation,
        p=solution[:-1],
        e=solution[-1],
        input_dim=x.shape[1],
        class_count=y.shape[1],
    )


_TRAINERS = {"ELM": train_elm, "RVFL": train_rvfl, "SNN": train_snn}


def train_variant(variant: str, x, y_onehot, cfg: ModelConfig) -> RnnModel:
    if variant not in _TRAINERS:
        raise ValueError(f"unknown variant {variant!r}")
    return _TRAINERS[variant](x, y_onehot, cfg)


def predict_scores(model: RnnModel, x) -> np.ndarray:
    """Raw output-layer scores, one row per sample."""
    x = as_matrix(x, "x")
    if x.shape[1] != model.input_dim:
        raise ValueError(
            f"feature width {x.shape[1]} does not match model input_dim {model.input_dim}"
        )
    hidden = hidden_map(x, model.layer, model.activation)
    if model.variant == "ELM":
        return hidden @ model.p
    if model.variant == "RVFL":
        return np.hstack([x, hidden]) @ model.p
    return hidden @ model.p + model.e


def predict_labels(model: RnnModel, x) -> np.ndarray:
    """Per-row argmax of the scores; ties resolve to the lowest class index."""
    return np.argmax(predict_scores(model, x), axis=1)


# --- model persistence ------------------------------------------------------
#
# Self-describing JSON document. Floats serialize via repr and therefore
# round-trip exactly; the hidden layer is regenerated from its seed.

MODEL_KIND = "rnn-model"
FORMAT_VERSION = 1


def model_to_dict(model: RnnModel, encoding: LabelEncoding) -> dict:
    if encoding.m != model.class_count:
        raise ValueError("encoding class count does not match model")
    return {
        "kind": MODEL_KIND,
        "format_version": FORMAT_VERSION,
        "variant": model.variant,
        "seed": model.layer.seed,
        "distribution": model.layer.distribution,
        "activation": model.activation,
        "input_dim": model.input_dim,
        "hidden_nodes": model.layer.hidden_nodes,
        "class_names": list(encoding.class_names),
        "p": model.p.tolist(),
        "e": None if model.e is None else model.e.tolist(),
    }


def model_from_dict(doc: dict) -> tuple[RnnModel, LabelEncoding]:
    if doc.get("kind") != MODEL_KIND:
        raise ValueError(f"not a model document (kind={doc.get('kind')!r})")
    if doc.get("format_version") != FORMAT_VERSION:
        raise ValueError(f"unsupported model format version {doc.get('format_version')!r}")
    cfg = ModelConfig(
        hidden_nodes=doc["hidden_nodes"],
        activation=doc["activation"],
        distribution=doc["distribution"],
        seed=doc["seed"],
    )
    layer = init_random_layer(doc["input_dim"], cfg)
    encoding = LabelEncoding(tuple(doc["class_names"]))
    e = doc["e"]
    model = RnnModel(
        variant=doc["variant"],
        layer=layer,
        activation=doc["activation"],
        p=np.asarray(doc["p"], dtype=np.float64),
        e=None if e is None else np.asarray(e, dtype=np.float64),
        input_dim=doc["input_dim"],
        class_count=encoding.m,
    )
    return model, encoding


def save_model(model: RnnModel, encoding: LabelEncoding, path) -> None:
    Path(path).write_text(json.dumps(model_to_dict(model, encoding), indent=2) + "\n")


def load_model(path) -> tuple[RnnModel, LabelEncoding]:
    return model_from_dict(json.loads(Path(path).read_text()))
