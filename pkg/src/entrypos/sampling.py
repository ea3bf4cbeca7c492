"""Seeded generators for test matrices, partitions and preserver specs.

Every function takes a ``numpy.random.Generator`` (or anything accepted by
:func:`check_random_state`) as its first argument.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .preserver import MatrixFamily, PreserverSpec, threshold_C
from .strata import Partition
from .validation import check_random_state

__all__ = [
    "distinct_sorted",
    "rank_one_vector",
    "family_matrix",
    "gram_matrix",
    "complex_psd",
    "random_partition",
    "distinct_row_core",
    "reducible_nonneg_psd",
    "random_exponents",
    "random_spec",
    "rational_vector",
]


def distinct_sorted(rng, N: int, low: float, high: float, spacing: float = 0.0) -> np.ndarray:
    """``N`` increasing points in ``(low, high)`` at least ``spacing`` apart."""
    rng = check_random_state(rng)
    width = high - low - spacing * (N + 1)
    if width <= 0:
        raise ValueError("interval too short for the requested spacing")
    gaps = np.sort(rng.uniform(0.0, width, size=N))
    return low + spacing * np.arange(1, N + 1) + gaps


def rank_one_vector(rng, N: int, rho: float = 1.0, *, spacing: float = 0.05, allow_zero: bool = False) -> np.ndarray:
    rng = check_random_state(rng)
    top = np.sqrt(rho)
    u = distinct_sorted(rng, N, 0.0, top, spacing * top)
    if allow_zero and N > 1 and rng.random() < 0.3:
        u[0] = 0.0
    return rng.permutation(u)


def _row_gap(A) -> float:
    N = A.shape[0]
    gaps = [np.max(np.abs(A[i] - A[j])) for i in range(N) for j in range(i)]
    return min(gaps, default=np.inf) / np.max(np.abs(A))


def _with_row_gap(draw, min_row_gap: float, max_tries: int = 500) -> np.ndarray:
    """Redraw until rows differ by ``min_row_gap`` relative to the largest entry."""
    for _ in range(max_tries):
        A = draw()
        if _row_gap(A) >= min_row_gap:
            return A
    raise RuntimeError(f"no sample with row gap {min_row_gap} after {max_tries} draws")


def gram_matrix(
    rng, N: int, rho: float = 1.0, *, rank: int | None = None, nonneg: bool = True, min_row_gap: float = 0.0
) -> np.ndarray:
    """``B B^T`` rescaled so that the largest entry is ``0.95 rho``."""
    rng = check_random_state(rng)
    r = N if rank is None else rank

    def draw():
        B = rng.uniform(0.0, 1.0, size=(N, r)) if nonneg else rng.standard_normal((N, r))
        G = B @ B.T
        return 0.95 * rho * G / np.max(np.abs(G))

    return _with_row_gap(draw, min_row_gap)


def complex_psd(rng, N: int, rho: float = 1.0, *, rank: int | None = None, min_row_gap: float = 0.0) -> np.ndarray:
    """Hermitian PSD ``V* D V`` scaled into the closed disc of radius ``rho``."""
    rng = check_random_state(rng)
    r = N if rank is None else rank

    def draw():
        V = rng.standard_normal((r, N)) + 1j * rng.standard_normal((r, N))
        D = rng.uniform(0.1, 1.0, size=r)
        A = (V.conj().T * D) @ V
        A = (A + A.conj().T) / 2
        return 0.95 * rho * A / np.max(np.abs(A))

    return _with_row_gap(draw, min_row_gap)


def family_matrix(rng, family, N: int, rho: float = 1.0) -> np.ndarray:
    """A random member of the given test set."""
    rng = check_random_state(rng)
    family = MatrixFamily.parse(family)
    if family is MatrixFamily.RANK_ONE_OPEN:
        u = rank_one_vector(rng, N, rho)
        return np.outer(u, u)
    if family is MatrixFamily.RANK_ONE_CLOSED:
        u = rank_one_vector(rng, N, rho, allow_zero=True)
        return np.outer(u, u)
    if family is MatrixFamily.FULL_CLOSED:
        return gram_matrix(rng, N, rho, rank=int(rng.integers(1, N + 1)))
    return complex_psd(rng, N, rho, rank=int(rng.integers(1, N + 1)))


def random_partition(rng, N: int, blocks: int | None = None) -> Partition:
    """Uniform block count in ``[1, N]`` (unless given), every block non-empty."""
    rng = check_random_state(rng)
    m = int(rng.integers(1, N + 1)) if blocks is None else blocks
    labels = np.concatenate([np.arange(m), rng.integers(0, m, size=N - m)])
    return Partition.from_labels(rng.permutation(labels).tolist())


def distinct_row_core(rng, m: int, rho: float = 1.0, *, min_eig: float = 0.05, max_tries: int = 200) -> np.ndarray:
    """Positive definite ``m x m`` matrix with entries in ``[0, rho]`` and distinct rows.

    Built as ``D + s L L^T`` with ``L`` non-negative, so the diagonal
    dominates and the smallest eigenvalue stays away from zero.
    """
    rng = check_random_state(rng)
    for _ in range(max_tries):
        L = rng.uniform(0.0, 1.0, size=(m, m))
        G = L @ L.T
        G = 0.5 * G / np.max(G) + np.diag(rng.uniform(0.2, 0.45, size=m))
        G = rho * G / max(1.0, np.max(G))
        w = np.linalg.eigvalsh(G)
        rows_ok = all(np.max(np.abs(G[i] - G[j])) > 1e-3 for i in range(m) for j in range(i))
        if w[0] >= min_eig * rho and rows_ok:
            return G
    raise RuntimeError("could not draw a well-conditioned core")


def reducible_nonneg_psd(rng, N: int, *, zero_row: bool = False, blocks: int | None = None) -> np.ndarray:
    """Non-negative PSD matrix that is a direct sum of irreducible blocks, rows permuted."""
    rng = check_random_state(rng)
    free = N - 1 if zero_row else N
    k = int(rng.integers(1, free + 1)) if blocks is None else blocks
    sizes = np.ones(k, dtype=int)
    for _ in range(free - k):
        sizes[rng.integers(0, k)] += 1
    A = np.zeros((N, N))
    start = 0
    for s in sizes:
        B = rng.uniform(0.2, 1.0, size=(s, s))
        A[start : start + s, start : start + s] = (B @ B.T) * rng.uniform(0.3, 3.0)
        start += s
    perm = rng.permutation(N)
    return A[np.ix_(perm, perm)]


def random_exponents(rng, N: int, *, integer: bool = True, top: int = 6, zero_first: bool = False) -> tuple:
    rng = check_random_state(rng)
    if integer:
        pool = np.arange(1 if zero_first else 0, top + 1)
        picks = sorted(rng.choice(pool, size=N - 1 if zero_first else N, replace=False).tolist())
        return tuple(([0] if zero_first else []) + [int(x) for x in picks])
    vals = np.sort(rng.uniform(0.0, float(top), size=N))
    vals = vals + 0.1 * np.arange(N)
    if zero_first:
        vals[0] = 0.0
    return tuple(float(x) for x in vals)


def _rational(rng, low: int, high: int, denom: int) -> Fraction:
    return Fraction(int(rng.integers(low * denom, high * denom + 1)), denom)


def rational_vector(rng, N: int, *, denom: int = 8, low: int = 0, high: int = 1, distinct: bool = True) -> list:
    rng = check_random_state(rng)
    while True:
        u = [_rational(rng, low, high, denom) for _ in range(N)]
        if not distinct or len(set(u)) == N:
            return u


def random_spec(
    rng,
    N: int,
    family=MatrixFamily.FULL_CLOSED,
    *,
    integer: bool = True,
    top: int = 6,
    zero_first: bool = True,
    cprime_fraction: float | None = None,
    rho=1,
) -> PreserverSpec:
    """Random spec with rational coefficients in ``[1/2, 2]``.

    ``cprime_fraction`` sets ``c' = cprime_fraction / C``; by default it is
    drawn from ``[-0.9, 1]``.
    """
    rng = check_random_state(rng)
    family = MatrixFamily.parse(family)
    if family is MatrixFamily.COMPLEX_DISC:
        n0 = 0 if zero_first else int(rng.integers(0, 3))
        exps = tuple(range(n0, n0 + N))
    else:
        exps = random_exponents(rng, N, integer=integer, top=max(top, N), zero_first=zero_first)
        if family is MatrixFamily.FULL_CLOSED and not integer:
            exps = tuple(e if e == 0 else e + N - 1 for e in exps)
    M = exps[-1] + int(rng.integers(1, 3))
    coeffs = tuple(max(_rational(rng, 0, 2, 4), Fraction(1, 2)) for _ in range(N))
    spec = PreserverSpec(coeffs, exps, M, 0, family, rho)
    frac = rng.uniform(-0.9, 1.0) if cprime_fraction is None else cprime_fraction
    C = threshold_C(spec)
    cprime = Fraction(frac).limit_denominator(1000) / C if spec.exact else frac / float(C)
    return spec.with_cprime(cprime)
