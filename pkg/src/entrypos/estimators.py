"""scikit-learn style wrappers over the functional API.

These estimators take a single square matrix as ``X``; they exist so that
the operations compose with ``clone``, ``get_params`` and pipelines.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .linalg import DEFAULT_TOL
from .preserver import PreserverSpec, apply_entrywise, dominating_vector
from .rayleigh import c_R
from .strata import compress, compress_weighted, inflate, inflate_weighted, partition_of

__all__ = ["EntrywiseTransform", "StratumCompressor", "RankOneDominator", "RayleighBound"]


class EntrywiseTransform(TransformerMixin, BaseEstimator):
    """Apply ``f``, ``h`` or ``g`` of a preserver entrywise."""

    def __init__(self, coeffs=(1,), exponents=(0,), M=1, cprime=0, testset="FullClosedRealPowers", rho=1, part="f"):
        self.coeffs = coeffs
        self.exponents = exponents
        self.M = M
        self.cprime = cprime
        self.testset = testset
        self.rho = rho
        self.part = part

    def fit(self, X=None, y=None):
        self.spec_ = PreserverSpec(tuple(self.coeffs), tuple(self.exponents), self.M, self.cprime, self.testset, self.rho)
        if self.part not in ("f", "h", "g"):
            raise ValueError(f"part must be 'f', 'h' or 'g', got {self.part!r}")
        return self

    def transform(self, X):
        check_is_fitted(self, "spec_")
        return apply_entrywise(self.spec_, np.asarray(X), part=self.part)


class StratumCompressor(TransformerMixin, BaseEstimator):
    """Learn ``pi(A)`` on fit; compress on transform, inflate on inverse."""

    def __init__(self, weighted=False, tol=None):
        self.weighted = weighted
        self.tol = tol

    def fit(self, X, y=None):
        self.partition_ = partition_of(X, self.tol or DEFAULT_TOL)
        self.n_blocks_ = len(self.partition_)
        return self

    def transform(self, X):
        check_is_fitted(self, "partition_")
        return (compress_weighted if self.weighted else compress)(X, self.partition_)

    def inverse_transform(self, X):
        check_is_fitted(self, "partition_")
        return (inflate_weighted if self.weighted else inflate)(X, self.partition_)


class RankOneDominator(BaseEstimator):
    """Fit stores a vector ``u_`` with ``X >= u_ u_*``."""

    def __init__(self, method="auto", random_state=None, max_retries=64, tol=None):
        self.method = method
        self.random_state = random_state
        self.max_retries = max_retries
        self.tol = tol

    def fit(self, X, y=None):
        tol = self.tol or DEFAULT_TOL
        self.u_ = dominating_vector(X, self.random_state, tol, method=self.method, max_retries=self.max_retries)
        A = np.asarray(X)
        self.residual_min_eig_ = float(np.linalg.eigvalsh(A - np.outer(self.u_, self.u_.conj()))[0])
        return self


class RayleighBound(BaseEstimator):
    def __init__(self, coeffs=(1,), exponents=(0,), M=1, tol=None):
        self.coeffs = coeffs
        self.exponents = exponents
        self.M = M
        self.tol = tol

    def fit(self, X, y=None):
        self.c_R_ = c_R(X, self.coeffs, self.exponents, self.M, self.tol or DEFAULT_TOL)
        return self
