"""The Rayleigh-quotient constant ``C_R(A)``.

``C_R(A)`` is the smallest constant with ``A^{o M} <= C_R h[A]``; it equals
the spectral radius of ``h[A]^{+/2} A^{o M} h[A]^{+/2}``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Callable

import mpmath
import numpy as np

from .linalg import DEFAULT_TOL, ToleranceProfile, is_psd, pseudo_inverse_sqrt
from .preserver import PreserverSpec, hadamard_power, threshold_C
from .strata import Partition, inflate, partition_of
from .symfunc import gen_vandermonde_det
from .validation import check_exponents, check_hermitian, check_vector, exponents_are_integral

__all__ = [
    "rayleigh_quotient",
    "c_R",
    "c_R_rank_one",
    "minimality_certify",
    "MinimalityVerdict",
    "continuity_probe",
    "ContinuityReport",
    "inflated_path",
    "jump_witness",
    "equality_gap",
]


def _h_data(h, exponents=None, M=None):
    """Normalize ``h`` (a spec or a coefficient sequence) to ``(coeffs, exps, M)``."""
    if isinstance(h, PreserverSpec):
        return tuple(float(c) for c in h.coeffs), h.exponents, h.M if M is None else M
    if exponents is None or M is None:
        raise TypeError("pass a PreserverSpec or coefficients together with exponents and M")
    coeffs = tuple(float(c) for c in np.atleast_1d(h))
    exps = check_exponents(exponents)
    if len(coeffs) != len(exps):
        raise ValueError("coefficients and exponents differ in length")
    if any(c <= 0 for c in coeffs):
        raise ValueError("coefficients must be positive")
    return coeffs, exps, M


def _h_matrix(arr, coeffs, exps):
    return sum(c * hadamard_power(arr, e) for c, e in zip(coeffs, exps))


def rayleigh_quotient(A, u, c, n=None, M=None) -> float:
    """``(u* A^{o M} u) / (u* h[A] u)``."""
    coeffs, exps, M = _h_data(c, n, M)
    arr = check_hermitian(A)
    u = check_vector(u)
    num = np.vdot(u, hadamard_power(arr, M) @ u).real
    den = np.vdot(u, _h_matrix(arr, coeffs, exps) @ u).real
    if abs(den) <= 1e-300 or abs(den) <= 1e-14 * max(1.0, abs(num)) * np.vdot(u, u).real:
        raise ZeroDivisionError("u* h[A] u vanishes")
    return float(num / den)


def _check_cr_domain(arr, exps, M, tol):
    if exps[0] != 0:
        raise ValueError("the Rayleigh constant is defined here for n_0 = 0")
    if not M > 0:
        raise ValueError("M must be positive")
    if not is_psd(arr, tol).psd:
        raise ValueError("A is not positive semidefinite")
    if not exponents_are_integral(tuple(exps) + (M,)):
        if np.iscomplexobj(arr) or np.any(arr < 0):
            raise ValueError("real exponents need a matrix with non-negative entries")


def c_R(A, h, exponents=None, M=None, tol: ToleranceProfile = DEFAULT_TOL) -> float:
    """Spectral radius of ``h[A]^{+/2} A^{o M} h[A]^{+/2}``.

    ``h`` is a :class:`PreserverSpec` or a coefficient sequence; ``M`` only
    needs to be positive here.
    """
    coeffs, exps, M = _h_data(h, exponents, M)
    arr = check_hermitian(A)
    _check_cr_domain(arr, exps, M, tol)
    S = pseudo_inverse_sqrt(_h_matrix(arr, coeffs, exps), tol)
    T = S @ hadamard_power(arr, M) @ S
    w = np.linalg.eigvalsh((T + T.conj().T) / 2)
    return float(max(abs(w[0]), abs(w[-1])))


def c_R_rank_one(u, h, exponents=None, M=None, *, dps: int | None = None) -> float:
    """``sum_j det(u^{o n_j})^2 / (c_j det(u^{o n})^2)`` for distinct positive ``u``."""
    coeffs, exps, M = _h_data(h, exponents, M)
    u = check_vector(u)
    if np.iscomplexobj(u) or np.any(u <= 0):
        raise ValueError("entries of u must be positive")
    if len(np.unique(u)) != u.size:
        raise ValueError("entries of u must be distinct")
    if u.size != len(exps):
        raise ValueError(f"u has {u.size} entries but h has {len(exps)} terms")
    pts = list(u)
    if dps:
        with mpmath.workdps(dps):
            pts = [mpmath.mpf(float(x)) for x in u]
            base = gen_vandermonde_det(pts, exps, dps=dps)
            total = mpmath.mpf(0)
            for j, cj in enumerate(coeffs):
                n_j = exps[:j] + exps[j + 1 :] + (M,)
                total += (gen_vandermonde_det(pts, n_j, dps=dps) / base) ** 2 / cj
            return float(total)
    base = gen_vandermonde_det(pts, exps)
    total = 0.0
    for j, cj in enumerate(coeffs):
        n_j = exps[:j] + exps[j + 1 :] + (M,)
        total += (gen_vandermonde_det(pts, n_j) / base) ** 2 / cj
    return float(total)


@dataclass
class MinimalityVerdict:
    c_R: float
    attains: bool
    minimal: bool
    degenerate: bool
    min_eig_below: float

    @property
    def passed(self) -> bool:
        return self.attains and (self.minimal or self.degenerate)

    def to_dict(self) -> dict:
        return asdict(self)


def minimality_certify(
    A, h, exponents=None, M=None, tol: ToleranceProfile = DEFAULT_TOL, *, shrink: float = 1e-6
) -> MinimalityVerdict:
    """``C_R h[A] - A^{o M}`` is PSD, and shrinking ``C_R`` by ``shrink`` breaks that."""
    coeffs, exps, M = _h_data(h, exponents, M)
    arr = check_hermitian(A)
    value = c_R(arr, coeffs, exps, M, tol)
    H = _h_matrix(arr, coeffs, exps)
    P = hadamard_power(arr, M)
    attains = is_psd(value * H - P, tol).psd
    scale = max(1.0, float(np.max(np.abs(np.linalg.eigvalsh(P)))))
    degenerate = value <= tol.strict_margin
    below = float(np.linalg.eigvalsh((1 - shrink) * value * H - P)[0])
    return MinimalityVerdict(value, bool(attains), bool(below < -1e-12 * scale), bool(degenerate), below)


def inflated_path(B, E, pi: Partition) -> Callable[[float], np.ndarray]:
    """``t -> inflate(B + t E, pi)``; stays in the stratum while ``B + t E`` has distinct rows."""
    B = np.asarray(B, dtype=float)
    E = np.asarray(E, dtype=float)
    return lambda t: inflate(B + t * E, pi)


@dataclass
class ContinuityReport:
    deltas: list
    oscillations: list
    ratios: list
    passed: bool
    aborted_at: float | None = None
    evaluations: int = 0
    values: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def continuity_probe(
    pi: Partition,
    h,
    M,
    path: Callable[[float], np.ndarray],
    steps: int = 16,
    *,
    delta: float = 1e-3,
    span: float = 1.0,
    exponents=None,
    factor: float = 1.5,
    tol: ToleranceProfile = DEFAULT_TOL,
) -> ContinuityReport:
    """Three-level refinement test of ``t -> C_R(path(t))`` on ``[0, span]``.

    The oscillation ``max_k |C_R(t_k + d) - C_R(t_k)|`` is measured for
    ``d = delta, delta/2, delta/4``. Each halving must shrink it by a factor
    within ``[2/factor, 2*factor]``. Every sampled point is checked to have
    partition ``pi``; the probe stops at the first point that leaves.
    """
    coeffs, exps, M = _h_data(h, exponents, M)
    base = np.linspace(0.0, span - delta, steps)
    deltas = [delta, delta / 2, delta / 4]
    cache: dict = {}
    values = []

    def value(t):
        if t not in cache:
            A = path(t)
            if partition_of(A, tol) != pi:
                raise _LeftStratum(t)
            cache[t] = c_R(A, coeffs, exps, M, tol)
        return cache[t]

    try:
        oscillations = []
        for d in deltas:
            oscillations.append(max(abs(value(t + d) - value(t)) for t in base))
        values = [value(t) for t in base]
    except _LeftStratum as exc:
        return ContinuityReport(deltas, [], [], False, exc.t, len(cache))
    ratios = []
    for a, b in zip(oscillations, oscillations[1:]):
        ratios.append(a / b if b > 0 else (1.0 if a == 0 else float("inf")))
    passed = all(a == 0.0 for a in oscillations) or all(2 / factor <= r <= 2 * factor for r in ratios)
    return ContinuityReport(deltas, oscillations, ratios, bool(passed), None, len(cache), values)


class _LeftStratum(Exception):
    def __init__(self, t):
        super().__init__(t)
        self.t = t


def jump_witness(h, M, *, exponents=None, ts=(1e-2, 1e-3, 1e-4), tol: ToleranceProfile = DEFAULT_TOL) -> dict:
    """``C_R`` along ``(1-t) 1 + t Id`` (2x2): value at ``t = 0`` versus small ``t > 0``."""
    coeffs, exps, M = _h_data(h, exponents, M)
    ones = np.ones((2, 2))
    at_zero = c_R(ones, coeffs, exps, M, tol)
    right = [c_R((1 - t) * ones + t * np.eye(2), coeffs, exps, M, tol) for t in ts]
    return {
        "at_zero": at_zero,
        "t": list(ts),
        "right_values": right,
        "jump": abs(right[-1] - at_zero),
        "right_settled": abs(right[-1] - right[-2]) <= 1e-2 * max(1.0, abs(right[-1])),
    }


def equality_gap(A, spec: PreserverSpec, tol: ToleranceProfile = DEFAULT_TOL) -> dict:
    """``C_R(A)``, the threshold ``C`` and their difference."""
    arr = check_hermitian(A)
    if np.iscomplexobj(arr) or np.any(arr < 0) or np.any(arr > float(spec.rho) * (1 + 1e-12)):
        raise ValueError("A must have entries in [0, rho]")
    cR = c_R(arr, spec, tol=tol)
    cV = threshold_C(spec)
    return {"cR": cR, "cV": cV, "gap": float(cV) - cR}
