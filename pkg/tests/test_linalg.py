import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from randnet.linalg import as_matrix, pseudo_inverse, solve_min_norm, svd


def frob(a):
    return float(np.linalg.norm(a, "fro"))


def penrose_residuals(a, ap):
    """The four Penrose condition residuals, each in Frobenius norm."""
    return (
        frob(a @ ap @ a - a),
        frob(ap @ a @ ap - ap),
        frob((a @ ap).T - a @ ap),
        frob((ap @ a).T - ap @ a),
    )


def random_matrix(rng, rows, cols, rank=None):
    if rank is None:
        return rng.standard_normal((rows, cols))
    return rng.standard_normal((rows, rank)) @ rng.standard_normal((rank, cols))


# --- as_matrix --------------------------------------------------------------


def test_as_matrix_rejects_empty_and_nonfinite():
    with pytest.raises(ValueError):
        as_matrix(np.empty((0, 3)))
    with pytest.raises(ValueError):
        as_matrix([1.0, 2.0])
    with pytest.raises(ValueError):
        as_matrix([[1.0, np.nan]])
    with pytest.raises(ValueError):
        as_matrix([[np.inf, 0.0]])


def test_as_matrix_row_major_float64():
    a = as_matrix([[1, 2], [3, 4]])
    assert a.dtype == np.float64
    assert a.flags["C_CONTIGUOUS"]


# --- svd --------------------------------------------------------------------


def test_svd_identity():
    f = svd(np.eye(3))
    assert np.allclose(f.s, [1.0, 1.0, 1.0])


def test_svd_diagonal():
    f = svd(np.diag([3.0, 0.0]))
    assert np.allclose(f.s, [3.0, 0.0])


def test_svd_reconstructs_random_20x8():
    a = random_matrix(np.random.default_rng(0), 20, 8)
    f = svd(a)
    err = frob(f.u @ np.diag(f.s) @ f.vt - a)
    assert err <= 1e-8 * frob(a)


def test_svd_factors_orthonormal():
    a = random_matrix(np.random.default_rng(1), 12, 7)
    f = svd(a)
    assert np.abs(f.u.T @ f.u - np.eye(7)).max() <= 1e-10
    assert np.abs(f.vt @ f.vt.T - np.eye(7)).max() <= 1e-10
    assert np.all(np.diff(f.s) <= 0) and np.all(f.s >= 0)


# --- pseudo_inverse ---------------------------------------------------------


def test_pinv_identity():
    assert np.allclose(pseudo_inverse(np.eye(4)), np.eye(4))


def test_pinv_diagonal_reciprocal():
    got = pseudo_inverse(np.diag([2.0, 0.0]))
    assert np.allclose(got, np.diag([0.5, 0.0]))


def test_pinv_all_zero_matrix():
    got = pseudo_inverse(np.zeros((3, 2)))
    assert got.shape == (2, 3)
    assert np.all(got == 0.0)


def test_pinv_rank_deficient_penrose():
    a = random_matrix(np.random.default_rng(2), 10, 6, rank=3)
    ap = pseudo_inverse(a)
    tol = 1e-8 * frob(a)
    assert all(r <= tol for r in penrose_residuals(a, ap))


def test_pinv_rejects_negative_tolerance():
    with pytest.raises(ValueError):
        pseudo_inverse(np.eye(2), rank_tol=-1.0)


@settings(max_examples=40)
@given(
    rows=st.integers(1, 50),
    cols=st.integers(1, 30),
    deficient=st.booleans(),
    seed=st.integers(0, 2**32 - 1),
)
def test_pinv_penrose_property(rows, cols, deficient, seed):
    rng = np.random.default_rng(seed)
    rank = max(1, min(rows, cols) // 2) if deficient else None
    a = random_matrix(rng, rows, cols, rank=rank)
    ap = pseudo_inverse(a)
    tol = 1e-8 * frob(a)
    assert all(r <= tol for r in penrose_residuals(a, ap))


@settings(max_examples=25)
@given(
    rows=st.integers(1, 20),
    cols=st.integers(1, 15),
    deficient=st.booleans(),
    seed=st.integers(0, 2**32 - 1),
)
def test_pinv_involution(rows, cols, deficient, seed):
    rng = np.random.default_rng(seed)
    rank = max(1, min(rows, cols) // 2) if deficient else None
    a = random_matrix(rng, rows, cols, rank=rank)
    back = pseudo_inverse(pseudo_inverse(a))
    assert frob(back - a) <= 1e-6 * max(frob(a), 1e-300)


# --- solve_min_norm ---------------------------------------------------------


def test_solve_identity_system():
    y = random_matrix(np.random.default_rng(3), 5, 2)
    p = solve_min_norm(np.eye(5), y)
    assert np.allclose(p, y, atol=1e-12)


def test_solve_overdetermined_matches_normal_equations():
    rng = np.random.default_rng(4)
    a = random_matrix(rng, 10, 3)
    y = random_matrix(rng, 10, 2)
    # independent oracle: brute-force normal equations on a well-conditioned
    # input
    expected = np.linalg.solve(a.T @ a, a.T @ y)
    got = solve_min_norm(a, y)
    assert np.abs(got - expected).max() <= 1e-8


def test_solve_underdetermined_is_minimum_norm():
    rng = np.random.default_rng(5)
    a = random_matrix(rng, 3, 10)
    y = random_matrix(rng, 3, 2)
    p = solve_min_norm(a, y)
    assert frob(a @ p - y) <= 1e-8 * frob(y)
    # null-space basis: right singular vectors beyond the rank
    _, s, vt = np.linalg.svd(a)
    null = vt[3:]
    for _ in range(20):
        coeffs = rng.standard_normal((null.shape[0], 2))
        perturbed = p + 0.1 * (null.T @ coeffs)
        assert frob(a @ perturbed - y) <= 1e-6 * frob(y)  # still exact
        assert frob(perturbed) > frob(p)


def test_solve_dimension_mismatch():
    with pytest.raises(ValueError):
        solve_min_norm(np.eye(3), np.ones((4, 1)))


def test_solve_ridge_matches_regularized_normal_equations():
    rng = np.random.default_rng(6)
    a = random_matrix(rng, 12, 5)
    y = random_matrix(rng, 12, 2)
    lam = 0.37
    expected = np.linalg.solve(a.T @ a + lam * np.eye(5), a.T @ y)
    got = solve_min_norm(a, y, ridge=lam)
    assert np.abs(got - expected).max() <= 1e-8


@settings(max_examples=30)
@given(
    rows=st.integers(1, 25),
    cols=st.integers(1, 15),
    targets=st.integers(1, 3),
    deficient=st.booleans(),
    seed=st.integers(0, 2**32 - 1),
)
def test_solve_equals_pinv_times_y(rows, cols, targets, deficient, seed):
    rng = np.random.default_rng(seed)
    rank = max(1, min(rows, cols) // 2) if deficient else None
    a = random_matrix(rng, rows, cols, rank=rank)
    y = random_matrix(rng, rows, targets)
    direct = solve_min_norm(a, y)
    via_pinv = pseudo_inverse(a) @ y
    assert np.abs(direct - via_pinv).max() <= 1e-8 * max(1.0, np.abs(via_pinv).max())
