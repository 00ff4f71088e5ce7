"""Majority-vote ensemble of the three network variants.

One ensemble holds exactly one ELM, one RVFL, and one SNN, trained on the
same data but with independent random layers: member ``i`` (in ELM, RVFL,
SNN order) seeds its layer with ``master_seed + i``. Prediction is a hard
per-sample vote; a three-way tie (possible only with three or more
classes) resolves to the lowest class index among the three votes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .models import (
    FORMAT_VERSION,
    MODEL_KIND,
    SEED_MODULUS,
    VARIANTS,
    LabelEncoding,
    ModelConfig,
    RnnModel,
    encode_onehot,
    model_from_dict,
    model_to_dict,
    predict_labels,
    train_variant,
)

__all__ = [
    "EnsembleModel",
    "member_seeds",
    "ensemble_train",
    "majority_vote",
    "ensemble_predict",
    "ensemble_to_dict",
    "ensemble_from_dict",
    "save_ensemble",
    "load_ensemble",
    "load_classifier",
]

ENSEMBLE_KIND = "rnn-ensemble"


@dataclass(frozen=True, eq=False)
class EnsembleModel:
    """Three trained members in (ELM, RVFL, SNN) order plus the vote rule."""

    members: tuple[RnnModel, RnnModel, RnnModel]
    member_seeds: tuple[int, int, int]
    encoding: LabelEncoding

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        object.__setattr__(self, "member_seeds", tuple(self.member_seeds))
        if tuple(m.variant for m in self.members) != VARIANTS:
            raise ValueError(f"members must be one of each variant in {VARIANTS} order")
        dims = {(m.input_dim, m.class_count) for m in self.members}
        if len(dims) != 1:
            raise ValueError("members must share input_dim and class_count")
        if self.members[0].class_count != self.encoding.m:
            raise ValueError("encoding class count does not match members")

    @property
    def input_dim(self) -> int:
        return self.members[0].input_dim

    @property
    def class_count(self) -> int:
        return self.members[0].class_count


def member_seeds(master_seed: int) -> tuple[int, int, int]:
    """Seeds for the (ELM, RVFL, SNN) members: ``master_seed + i`` mod 2^64."""
    return tuple((master_seed + i) % SEED_MODULUS for i in range(3))


def ensemble_train(
    x, labels, encoding: LabelEncoding, cfg: ModelConfig, master_seed: int
) -> EnsembleModel:
    """Train all three variants on identical ``(x, one-hot labels)``."""
    y = encode_onehot(labels, encoding.m)
    seeds = member_seeds(master_seed)
    members = tuple(
        train_variant(variant, x, y, replace(cfg, seed=seed))
        for variant, seed in zip(VARIANTS, seeds)
    )
    return EnsembleModel(members=members, member_seeds=seeds, encoding=encoding)


def majority_vote(votes) -> np.ndarray:
    """Per-position label backed by at least two of the three vote lists.

    When all three disagree the lowest class index among the three votes
    wins, so the outcome never depends on voter order.
    """
    votes = list(votes)
    if len(votes) != 3:
        raise ValueError(f"expected exactly 3 vote lists, got {len(votes)}")
    a, b, c = (np.asarray(v) for v in votes)
    if not (a.shape == b.shape == c.shape) or a.ndim != 1:
        raise ValueError("vote lists must be 1-D and the same length")
    # a wins whenever it matches either peer; b==c covers the remaining
    # majority; a three-way split falls back to the smallest label.
    paired = np.where(b == c, b, a)
    split = (a != b) & (b != c) & (a != c)
    return np.where(split, np.minimum(np.minimum(a, b), c), paired)


def ensemble_predict(model: EnsembleModel, x) -> np.ndarray:
    """Majority vote over the three members' label predictions."""
    return majority_vote([predict_labels(m, x) for m in model.members])


# --- persistence ------------------------------------------------------------


def ensemble_to_dict(model: EnsembleModel) -> dict:
    # member_seeds[0] is master_seed by construction; store it explicitly
    # so the derivation stays auditable.
    return {
        "kind": ENSEMBLE_KIND,
        "format_version": FORMAT_VERSION,
        "master_seed": model.member_seeds[0],
        "member_seeds": list(model.member_seeds),
        "class_names": list(model.encoding.class_names),
        "members": [model_to_dict(m, model.encoding) for m in model.members],
    }


def ensemble_from_dict(doc: dict) -> EnsembleModel:
    if doc.get("kind") != ENSEMBLE_KIND:
        raise ValueError(f"not an ensemble document (kind={doc.get('kind')!r})")
    if doc.get("format_version") != FORMAT_VERSION:
        raise ValueError(
            f"unsupported ensemble format version {doc.get('format_version')!r}"
        )
    loaded = [model_from_dict(d) for d in doc["members"]]
    encodings = {enc.class_names for _, enc in loaded}
    if encodings != {tuple(doc["class_names"])}:
        raise ValueError("ensemble members disagree on class names")
    return EnsembleModel(
        members=tuple(m for m, _ in loaded),
        member_seeds=tuple(doc["member_seeds"]),
        encoding=loaded[0][1],
    )


def save_ensemble(model: EnsembleModel, path) -> None:
    Path(path).write_text(json.dumps(ensemble_to_dict(model), indent=2) + "\n")


def load_ensemble(path) -> EnsembleModel:
    return ensemble_from_dict(json.loads(Path(path).read_text()))


def load_classifier(path) -> tuple[EnsembleModel | RnnModel, LabelEncoding]:
    """Load either kind of model document, returning (model, encoding)."""
    doc = json.loads(Path(path).read_text())
    kind = doc.get("kind")
    if kind == ENSEMBLE_KIND:
        ens = ensemble_from_dict(doc)
        return ens, ens.encoding
    if kind == MODEL_KIND:
        return model_from_dict(doc)
    raise ValueError(f"unrecognized model document kind {kind!r}")
