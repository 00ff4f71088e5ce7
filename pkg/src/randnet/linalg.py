"""Dense float64 matrices and SVD-backed minimum-norm least squares.

A "matrix" anywhere in this package is a 2-D, C-contiguous float64
ndarray whose entries are all finite; :func:`as_matrix` is the validating
constructor. The pseudo-inverse and the solver share one rank rule:
singular values at or below ``max(rows, cols) * eps * s_max`` count as
zero (pass an explicit positive tolerance to override).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "NumericalError",
    "SvdFactors",
    "as_matrix",
    "svd",
    "pseudo_inverse",
    "solve_min_norm",
]

_EPS = float(np.finfo(np.float64).eps)


class NumericalError(RuntimeError):
    """The underlying SVD iteration failed to converge."""


def as_matrix(values, name: str = "matrix") -> np.ndarray:
    """Coerce ``values`` to a validated 2-D float64 array.

    Raises ``ValueError`` for empty input, wrong dimensionality, or any
    NaN/Inf entry.
    """
    a = np.asarray(values, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got {a.ndim}-D")
    if a.size == 0:
        raise ValueError(f"{name} must be nonempty")
    if not np.isfinite(a).all():
        raise ValueError(f"{name} has non-finite entries")
    return np.ascontiguousarray(a)


@dataclass(frozen=True, eq=False)
class SvdFactors:
    """Thin SVD ``a == u @ diag(s) @ vt`` with ``s`` non-increasing and >= 0."""

    u: np.ndarray
    s: np.ndarray
    vt: np.ndarray


def svd(a) -> SvdFactors:
    """Thin SVD of a validated matrix.

    Raises :class:`NumericalError` if the LAPACK iteration hits its cap
    without converging.
    """
    a = as_matrix(a)
    try:
        u, s, vt = np.linalg.svd(a, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            f"SVD did not converge on a {a.shape[0]}x{a.shape[1]} matrix"
        ) from exc
    return SvdFactors(u=u, s=s, vt=vt)


def _rank_cutoff(shape: tuple[int, int], s: np.ndarray, rank_tol: float) -> float:
    if rank_tol < 0:
        raise ValueError("rank_tol must be >= 0")
    if rank_tol > 0:
        return rank_tol
    top = float(s[0]) if s.size else 0.0
    return max(shape) * _EPS * top


def pseudo_inverse(a, rank_tol: float = 0.0) -> np.ndarray:
    """Moore-Penrose pseudo-inverse via SVD with singular-value thresholding.

    ``rank_tol == 0`` selects the automatic cutoff
    ``max(rows, cols) * eps * s_max``. Singular values at or below the
    cutoff are dropped, so an all-zero matrix maps to the all-zero
    transpose-shaped matrix rather than an error.
    """
    a = as_matrix(a)
    f = svd(a)
    cut = _rank_cutoff(a.shape, f.s, rank_tol)
    keep = f.s > cut
    inv_s = np.zeros_like(f.s)
    np.divide(1.0, f.s, out=inv_s, where=keep)
    return (f.vt.T * inv_s) @ f.u.T


def solve_min_norm(a, y, ridge: float = 0.0) -> np.ndarray:
    """Minimum-Frobenius-norm ``p`` minimizing ``||a @ p - y||_F``.

    Works from the SVD of ``a`` directly; the pseudo-inverse is never
    materialized. With ``ridge > 0`` returns the Tikhonov solution
    ``(aᵀa + ridge·I)⁻¹ aᵀ y`` instead (off by default).
    """
    a = as_matrix(a, "a")
    y = as_matrix(y, "y")
    if a.shape[0] != y.shape[0]:
        raise ValueError(
            f"row mismatch: a has {a.shape[0]} rows, y has {y.shape[0]}"
        )
    if ridge < 0:
        raise ValueError("ridge must be >= 0")
    f = svd(a)
    z = f.u.T @ y
    if ridge > 0:
        gain = f.s / (f.s * f.s + ridge)
    else:
        cut = _rank_cutoff(a.shape, f.s, 0.0)
        keep = f.s > cut
        gain = np.zeros_like(f.s)
        np.divide(1.0, f.s, out=gain, where=keep)
    return f.vt.T @ (gain[:, None] * z)
