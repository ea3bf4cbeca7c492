"""Spectral and order-theoretic primitives on Hermitian matrices.

Every floating-point decision (PSD membership, numeric rank, pseudo-inverse
cut-off) is made relative to the largest eigenvalue, using the thresholds
collected in :class:`ToleranceProfile`.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from typing import NamedTuple

import numpy as np
from scipy import linalg as sla

from .validation import check_hermitian

__all__ = [
    "ToleranceProfile",
    "DEFAULT_TOL",
    "SpectralFactorization",
    "PSDVerdict",
    "eigen_hermitian",
    "is_psd",
    "is_pd",
    "numeric_rank",
    "loewner_geq",
    "pseudo_inverse_sqrt",
    "spectral_radius",
    "min_eigenvalue",
]


@dataclass(frozen=True)
class ToleranceProfile:
    """Named numeric tolerances.

    ``psd_floor``, ``rank_gap`` and the two factorization tolerances are
    relative (scaled by ``max(1, lambda_max)``); ``row_eq`` is scaled by
    ``1 + max|a_ij|`` when comparing rows; ``strict_margin`` is absolute.
    """

    psd_floor: float = 1e-9
    rank_gap: float = 1e-8
    row_eq: float = 1e-10
    strict_margin: float = 1e-12
    reconstruction_tol: float = 1e-10
    orthogonality_tol: float = 1e-10

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not (isinstance(value, (int, float)) and value > 0):
                raise ValueError(f"tolerance {f.name} must be strictly positive, got {value!r}")

    def replace(self, **changes) -> "ToleranceProfile":
        values = {f.name: getattr(self, f.name) for f in fields(self)}
        values.update({k: v for k, v in changes.items() if v is not None})
        return ToleranceProfile(**values)


DEFAULT_TOL = ToleranceProfile()


class SpectralFactorization(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        Q = self.eigenvectors
        return (Q * self.eigenvalues) @ Q.conj().T


class PSDVerdict(NamedTuple):
    psd: bool
    min_eigenvalue: float


def _as_float_hermitian(A) -> np.ndarray:
    arr = check_hermitian(A, allow_object=True)
    if arr.dtype == object:
        arr = arr.astype(float)
    return arr


def eigen_hermitian(A) -> SpectralFactorization:
    """Eigen-decomposition with ascending eigenvalues.

    >>> eigen_hermitian([[2.0, 1.0], [1.0, 2.0]]).eigenvalues
    array([1., 3.])
    """
    arr = _as_float_hermitian(A)
    w, Q = sla.eigh(arr)
    return SpectralFactorization(w, Q)


def _lambda_max_scale(w: np.ndarray) -> float:
    return max(1.0, float(np.max(np.abs(w))) if w.size else 0.0)


def min_eigenvalue(A) -> float:
    return float(sla.eigh(_as_float_hermitian(A), eigvals_only=True)[0])


def is_psd(A, tol: ToleranceProfile = DEFAULT_TOL) -> PSDVerdict:
    w = sla.eigh(_as_float_hermitian(A), eigvals_only=True)
    lam_min = float(w[0])
    floor = -tol.psd_floor * max(1.0, float(w[-1]))
    return PSDVerdict(lam_min >= floor, lam_min)


def _rank_threshold(w: np.ndarray, tol: ToleranceProfile) -> float:
    return tol.rank_gap * _lambda_max_scale(w)


def numeric_rank(A, tol: ToleranceProfile = DEFAULT_TOL) -> int:
    w = sla.eigh(_as_float_hermitian(A), eigvals_only=True)
    return int(np.count_nonzero(np.abs(w) > _rank_threshold(w, tol)))


def is_pd(A, tol: ToleranceProfile = DEFAULT_TOL) -> bool:
    """Positive definite: PSD and numerically of full rank."""
    w = sla.eigh(_as_float_hermitian(A), eigvals_only=True)
    return bool(w[0] > _rank_threshold(w, tol))


def loewner_geq(A, B, tol: ToleranceProfile = DEFAULT_TOL) -> bool:
    a = _as_float_hermitian(A)
    b = _as_float_hermitian(B)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return is_psd(a - b, tol).psd


def pseudo_inverse_sqrt(A, tol: ToleranceProfile = DEFAULT_TOL) -> np.ndarray:
    """Return ``(A^+)^{1/2}`` for PSD ``A``.

    Eigenvalues above the rank cut are mapped to ``lambda^{-1/2}``, the rest
    to zero.
    """
    arr = _as_float_hermitian(A)
    w, Q = sla.eigh(arr)
    if w[0] < -tol.psd_floor * max(1.0, float(w[-1])):
        raise ValueError(f"matrix is not positive semidefinite (min eigenvalue {w[0]:.3g})")
    keep = w > _rank_threshold(w, tol)
    inv_sqrt = np.zeros_like(w)
    inv_sqrt[keep] = 1.0 / np.sqrt(w[keep])
    return (Q * inv_sqrt) @ Q.conj().T


def spectral_radius(A) -> float:
    w = sla.eigh(_as_float_hermitian(A), eigvals_only=True)
    return float(np.max(np.abs(w)))
