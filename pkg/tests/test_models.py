import json
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from randnet.models import (
    LabelEncoding,
    ModelConfig,
    RandomLayer,
    RnnModel,
    encode_onehot,
    hidden_map,
    init_random_layer,
    load_model,
    model_from_dict,
    model_to_dict,
    predict_labels,
    predict_scores,
    save_model,
    train_elm,
    train_rvfl,
    train_snn,
    train_variant,
)
from randnet.synth import make_blobs, make_xor


def training_accuracy(model, x, labels):
    return float(np.mean(predict_labels(model, x) == labels))


def zero_layer(n, h):
    return RandomLayer(
        w=np.zeros((h, n)), b=np.zeros(h), seed=0, distribution="uniform_pm1"
    )


# --- random layer -----------------------------------------------------------


def test_layer_reproducible_from_seed():
    cfg = ModelConfig(hidden_nodes=7, seed=123)
    a = init_random_layer(5, cfg)
    b = init_random_layer(5, cfg)
    assert np.array_equal(a.w, b.w) and np.array_equal(a.b, b.b)


def test_uniform_support():
    layer = init_random_layer(20, ModelConfig(hidden_nodes=50, seed=9))
    assert np.all(layer.w >= -1.0) and np.all(layer.w <= 1.0)
    assert np.all(layer.b >= -1.0) and np.all(layer.b <= 1.0)


def test_uniform_mean_near_zero():
    # 10^4 draws: |empirical mean| well inside the 0.05 band
    layer = init_random_layer(100, ModelConfig(hidden_nodes=100, seed=11))
    assert abs(layer.w.mean()) <= 0.05


def test_gaussian_distribution_selectable():
    cfg = ModelConfig(hidden_nodes=60, seed=2, distribution="gaussian01")
    layer = init_random_layer(40, cfg)
    assert layer.w.max() > 1.0  # gaussian tails leave [-1, 1]
    assert abs(layer.w.mean()) <= 0.1


def test_different_seeds_differ():
    a = init_random_layer(5, ModelConfig(hidden_nodes=7, seed=0))
    b = init_random_layer(5, ModelConfig(hidden_nodes=7, seed=1))
    assert not np.array_equal(a.w, b.w)


# --- hidden map -------------------------------------------------------------


def test_hidden_map_zero_weights_sigmoid():
    x = np.random.default_rng(0).standard_normal((4, 3))
    out = hidden_map(x, zero_layer(3, 5), "sigmoid")
    assert np.all(out == 0.5)


def test_hidden_map_zero_weights_tanh():
    x = np.random.default_rng(0).standard_normal((4, 3))
    out = hidden_map(x, zero_layer(3, 5), "tanh")
    assert np.all(out == 0.0)


def test_hidden_map_scalar_oracle():
    w = np.array([[0.5, -1.0], [2.0, 0.25]])
    b = np.array([0.1, -0.3])
    layer = RandomLayer(w=w, b=b, seed=0, distribution="uniform_pm1")
    x = np.array([[1.5, -2.0]])
    out = hidden_map(x, layer, "sigmoid")
    for j in range(2):
        z = w[j, 0] * x[0, 0] + w[j, 1] * x[0, 1] + b[j]
        assert out[0, j] == pytest.approx(1.0 / (1.0 + math.exp(-z)), abs=1e-12)


def test_hidden_map_sigmoid_in_open_unit_interval():
    layer = init_random_layer(6, ModelConfig(hidden_nodes=30, seed=3))
    x = np.random.default_rng(1).standard_normal((10, 6))
    out = hidden_map(x, layer, "sigmoid")
    assert np.all((out > 0.0) & (out < 1.0))


def test_hidden_map_dimension_mismatch():
    with pytest.raises(ValueError):
        hidden_map(np.ones((2, 4)), zero_layer(3, 5), "sigmoid")


# --- one-hot ----------------------------------------------------------------


def test_onehot_basic():
    assert np.array_equal(encode_onehot([0, 1], 2), [[1.0, 0.0], [0.0, 1.0]])


def test_onehot_repeated_label():
    out = encode_onehot([1, 1, 1], 3)
    assert np.array_equal(out, np.tile([0.0, 1.0, 0.0], (3, 1)))


def test_onehot_column_sums_match_class_counts():
    rng = np.random.default_rng(4)
    labels = rng.integers(0, 4, size=200)
    out = encode_onehot(labels, 4)
    assert np.array_equal(out.sum(axis=0), np.bincount(labels, minlength=4))
    assert np.all(out.sum(axis=1) == 1.0)


def test_onehot_out_of_range():
    with pytest.raises(ValueError):
        encode_onehot([0, 2], 2)
    with pytest.raises(ValueError):
        encode_onehot([-1], 2)


# --- training ---------------------------------------------------------------


@pytest.mark.parametrize("trainer", [train_elm, train_rvfl, train_snn])
def test_xor_interpolation(trainer):
    ds = make_xor(4)
    y = encode_onehot(ds.labels, 2)
    model = trainer(ds.x, y, ModelConfig(hidden_nodes=50, seed=1))
    assert training_accuracy(model, ds.x, ds.labels) == 1.0


@pytest.mark.parametrize("trainer", [train_elm, train_rvfl, train_snn])
def test_separable_blobs_interpolation(trainer):
    ds = make_blobs(n=50, dim=20, sep=4.0, seed=3)
    y = encode_onehot(ds.labels, 2)
    model = trainer(ds.x, y, ModelConfig(hidden_nodes=400, seed=1))
    assert training_accuracy(model, ds.x, ds.labels) == 1.0


def test_elm_constant_class_target():
    rng = np.random.default_rng(5)
    x = rng.standard_normal((20, 4))
    labels = np.ones(20, dtype=int)
    model = train_elm(x, encode_onehot(labels, 2), ModelConfig(hidden_nodes=30, seed=2))
    assert np.all(predict_labels(model, x) == 1)


def test_rvfl_output_weight_rows():
    rng = np.random.default_rng(6)
    x = rng.standard_normal((25, 3))
    y = encode_onehot(rng.integers(0, 2, 25), 2)
    model = train_rvfl(x, y, ModelConfig(hidden_nodes=400, seed=1))
    assert model.p.shape == (403, 2)


def test_rvfl_fits_linear_target_exactly():
    # the direct link alone can represent a linear map of the inputs
    rng = np.random.default_rng(7)
    x = rng.standard_normal((40, 6))
    w_true = rng.standard_normal((6, 2))
    y = x @ w_true
    model = train_rvfl(x, y, ModelConfig(hidden_nodes=30, seed=4))
    hidden = hidden_map(x, model.layer, model.activation)
    design = np.hstack([x, hidden])
    assert np.linalg.norm(design @ model.p - y, "fro") <= 1e-6


def test_snn_constant_target_absorbed_by_bias():
    rng = np.random.default_rng(8)
    x = rng.standard_normal((15, 3))
    c = np.array([0.25, -1.5])
    y = np.tile(c, (15, 1))
    model = train_snn(x, y, ModelConfig(hidden_nodes=20, seed=5))
    assert np.abs(predict_scores(model, x) - c).max() <= 1e-6


def test_snn_shares_layer_with_elm_on_same_seed():
    rng = np.random.default_rng(9)
    x = rng.standard_normal((12, 4))
    y = encode_onehot(rng.integers(0, 2, 12), 2)
    cfg = ModelConfig(hidden_nodes=16, seed=77)
    elm = train_elm(x, y, cfg)
    snn = train_snn(x, y, cfg)
    assert np.array_equal(elm.layer.w, snn.layer.w)
    assert np.array_equal(elm.layer.b, snn.layer.b)
    assert elm.p.shape == snn.p.shape and snn.e is not None


def test_dimension_laws_after_training():
    rng = np.random.default_rng(10)
    x = rng.standard_normal((30, 5))
    y = encode_onehot(rng.integers(0, 3, 30), 3)
    cfg = ModelConfig(hidden_nodes=12, seed=6)
    elm = train_elm(x, y, cfg)
    rvfl = train_rvfl(x, y, cfg)
    snn = train_snn(x, y, cfg)
    assert elm.p.shape == (12, 3) and elm.e is None
    assert rvfl.p.shape == (17, 3) and rvfl.e is None
    assert snn.p.shape == (12, 3) and snn.e.shape == (3,)


def test_training_determinism():
    ds = make_blobs(n=30, dim=5, sep=2.0, seed=11)
    y = encode_onehot(ds.labels, 2)
    cfg = ModelConfig(hidden_nodes=25, seed=42)
    a = train_elm(ds.x, y, cfg)
    b = train_elm(ds.x, y, cfg)
    assert np.array_equal(a.p, b.p)


def test_train_sample_mismatch():
    with pytest.raises(ValueError):
        train_elm(np.ones((3, 2)), np.ones((4, 2)), ModelConfig(hidden_nodes=5))


def test_rnn_model_shape_validation():
    layer = zero_layer(3, 5)
    with pytest.raises(ValueError):
        RnnModel(
            variant="ELM", layer=layer, activation="sigmoid",
            p=np.zeros((4, 2)), e=None, input_dim=3, class_count=2,
        )
    with pytest.raises(ValueError):
        RnnModel(
            variant="SNN", layer=layer, activation="sigmoid",
            p=np.zeros((5, 2)), e=None, input_dim=3, class_count=2,
        )


@settings(max_examples=25)
@given(
    n_samples=st.integers(2, 8),
    n_features=st.integers(1, 4),
    m=st.integers(2, 3),
    seed=st.integers(0, 2**32 - 1),
    variant=st.sampled_from(["ELM", "RVFL", "SNN"]),
)
def test_interpolation_regime_property(n_samples, n_features, m, seed, variant):
    """H >= N with a well-conditioned design matrix implies exact fit."""
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n_samples, n_features))
    labels = rng.integers(0, m, n_samples)
    assume(len(np.unique(labels)) == m)
    y = encode_onehot(labels, m)
    cfg = ModelConfig(hidden_nodes=30, seed=seed % 2**32)
    model = train_variant(variant, x, y, cfg)
    hidden = hidden_map(x, model.layer, model.activation)
    if variant == "ELM":
        design = hidden
    elif variant == "RVFL":
        design = np.hstack([x, hidden])
    else:
        design = np.hstack([hidden, np.ones((n_samples, 1))])
    s = np.linalg.svd(design, compute_uv=False)
    assume(s[-1] > 1e-8 * s[0])  # full row rank with margin
    scores = predict_scores(model, x)
    assert np.linalg.norm(scores - y, "fro") <= 1e-6
    assert training_accuracy(model, x, labels) == 1.0


# --- prediction -------------------------------------------------------------


def test_scores_interpolate_onehot_targets():
    ds = make_xor(4)
    y = encode_onehot(ds.labels, 2)
    model = train_elm(ds.x, y, ModelConfig(hidden_nodes=50, seed=1))
    assert np.abs(predict_scores(model, ds.x) - y).max() <= 1e-6


def test_duplicated_sample_rows_score_identically():
    rng = np.random.default_rng(12)
    x = rng.standard_normal((10, 4))
    y = encode_onehot(rng.integers(0, 2, 10), 2)
    model = train_rvfl(x, y, ModelConfig(hidden_nodes=8, seed=13))
    stacked = np.tile(x[2], (6, 1))
    scores = predict_scores(model, stacked)
    assert np.all(scores == scores[0])


def test_predict_wrong_feature_width():
    ds = make_xor(4)
    model = train_elm(ds.x, encode_onehot(ds.labels, 2), ModelConfig(hidden_nodes=5))
    with pytest.raises(ValueError):
        predict_scores(model, np.ones((2, 3)))


def test_label_tie_breaks_to_lowest_index():
    # zero weights + relu -> all scores identical, so every row ties
    layer = zero_layer(2, 4)
    model = RnnModel(
        variant="ELM", layer=layer, activation="relu",
        p=np.zeros((4, 3)), e=None, input_dim=2, class_count=3,
    )
    labels = predict_labels(model, np.ones((5, 2)))
    assert np.all(labels == 0)


def test_labels_match_independent_argmax():
    rng = np.random.default_rng(14)
    x = rng.standard_normal((30, 6))
    y = encode_onehot(rng.integers(0, 3, 30), 3)
    model = train_snn(x, y, ModelConfig(hidden_nodes=10, seed=15))
    scores = predict_scores(model, x)
    expected = [int(np.argmax(row)) for row in scores]
    assert np.array_equal(predict_labels(model, x), expected)


def test_argmax_invariant_under_monotone_transform():
    rng = np.random.default_rng(15)
    scores = rng.standard_normal((50, 4))
    transformed = np.exp(2.0 * scores + 1.0)  # strictly increasing
    assert np.array_equal(np.argmax(scores, axis=1), np.argmax(transformed, axis=1))


def test_rvfl_with_zeroed_direct_link_matches_elm():
    from randnet.linalg import solve_min_norm

    rng = np.random.default_rng(16)
    x = rng.standard_normal((20, 5))
    y = encode_onehot(rng.integers(0, 2, 20), 2)
    cfg = ModelConfig(hidden_nodes=12, seed=17)
    elm = train_elm(x, y, cfg)
    hidden = hidden_map(x, elm.layer, cfg.activation)
    # RVFL pipeline with the direct-link columns forced to zero
    design = np.hstack([np.zeros_like(x), hidden])
    p = solve_min_norm(design, y)
    scores_zeroed = design @ p
    assert np.abs(scores_zeroed - predict_scores(elm, x)).max() <= 1e-8


# --- serialization ----------------------------------------------------------


@pytest.mark.parametrize("trainer", [train_elm, train_rvfl, train_snn])
def test_model_document_round_trip(trainer, tmp_path):
    ds = make_blobs(n=24, dim=4, sep=2.0, seed=18)
    y = encode_onehot(ds.labels, 2)
    model = trainer(ds.x, y, ModelConfig(hidden_nodes=9, seed=19))
    encoding = LabelEncoding(("neg", "pos"))

    doc = json.loads(json.dumps(model_to_dict(model, encoding)))
    back, enc_back = model_from_dict(doc)
    assert enc_back.class_names == encoding.class_names
    assert np.array_equal(back.p, model.p)
    assert np.array_equal(back.layer.w, model.layer.w)
    if model.e is not None:
        assert np.array_equal(back.e, model.e)
    assert np.array_equal(predict_labels(back, ds.x), predict_labels(model, ds.x))

    path = tmp_path / "model.json"
    save_model(model, encoding, path)
    loaded, _ = load_model(path)
    assert np.array_equal(loaded.p, model.p)


def test_model_document_rejects_wrong_kind():
    with pytest.raises(ValueError):
        model_from_dict({"kind": "something-else"})


def test_label_encoding_validation():
    with pytest.raises(ValueError):
        LabelEncoding(("one",))
    with pytest.raises(ValueError):
        LabelEncoding(("a", "a"))
