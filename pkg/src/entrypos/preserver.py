"""Polynomial positivity preservers and their sharp perturbation threshold.

A preserver is ``f(z) = sum_j c_j z^{n_j} + c' z^M`` acting entrywise;
``h`` is the unperturbed part and ``g = h - C^{-1} z^M`` the boundary case.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field, replace
from enum import Enum
from fractions import Fraction
from numbers import Integral
from typing import Callable, NamedTuple

import mpmath
import numpy as np
from scipy.sparse.csgraph import connected_components

from ._exact import det_fraction, exact_not_psd
from .linalg import (
    DEFAULT_TOL,
    ToleranceProfile,
    is_pd,
    is_psd,
    loewner_geq,
    numeric_rank,
)
from .symfunc import gen_vandermonde_det, hook_content_binomial, vandermonde
from .validation import (
    check_exponents,
    check_hermitian,
    check_random_state,
    check_vector,
    exponents_are_integral,
    is_rational,
)

__all__ = [
    "MatrixFamily",
    "PreserverSpec",
    "EquivalenceReport",
    "LMIVerdict",
    "SharpnessReport",
    "DominationError",
    "threshold_C",
    "apply_entrywise",
    "hadamard_power",
    "jacobi_trudi_det",
    "check_test_matrix",
    "sharp_lmi_check",
    "equivalence_report",
    "dominating_vector",
    "verify_domination",
    "rows_distinct",
    "loewner_necessity_check",
    "quadratic_threshold_comparison",
    "sharpness_search",
]


class MatrixFamily(str, Enum):
    """Admissible test sets for the preserver."""

    RANK_ONE_OPEN = "RankOneOpen"
    RANK_ONE_CLOSED = "RankOneClosed"
    FULL_CLOSED = "FullClosedRealPowers"
    COMPLEX_DISC = "ComplexDiscConsecutive"

    @classmethod
    def parse(cls, value) -> "MatrixFamily":
        if isinstance(value, cls):
            return value
        key = str(value).replace("-", "").replace("_", "").lower()
        aliases = {
            "rankoneopen": cls.RANK_ONE_OPEN,
            "rankoneclosed": cls.RANK_ONE_CLOSED,
            "fullclosedrealpowers": cls.FULL_CLOSED,
            "fullclosed": cls.FULL_CLOSED,
            "complexdiscconsecutive": cls.COMPLEX_DISC,
            "complexdisc": cls.COMPLEX_DISC,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown test set {value!r}") from None

    @property
    def rank_one(self) -> bool:
        return self in (MatrixFamily.RANK_ONE_OPEN, MatrixFamily.RANK_ONE_CLOSED)

    @property
    def real(self) -> bool:
        return self is not MatrixFamily.COMPLEX_DISC


def _num(x):
    if is_rational(x):
        x = Fraction(x)
        return int(x) if x.denominator == 1 else x
    return float(x)


@dataclass(frozen=True)
class PreserverSpec:
    """Coefficients, exponents, perturbation power and test set of a preserver."""

    coeffs: tuple
    exponents: tuple
    M: object
    cprime: object = 0
    testset: MatrixFamily = MatrixFamily.FULL_CLOSED
    rho: object = 1

    def __post_init__(self):
        coeffs = tuple(_num(c) for c in np.atleast_1d(np.asarray(self.coeffs, dtype=object)))
        exps = check_exponents(self.exponents)
        if len(coeffs) != len(exps):
            raise ValueError("coeffs and exponents must have the same length")
        if any(c <= 0 for c in coeffs):
            raise ValueError(f"coefficients must be positive, got {coeffs}")
        M = check_exponents((self.M,), name="M")[0]
        if not M > exps[-1]:
            raise ValueError(f"need M > n_(N-1), got M={M}, n={exps}")
        rho = _num(self.rho)
        if not rho > 0:
            raise ValueError("rho must be positive")
        family = MatrixFamily.parse(self.testset)
        N = len(exps)
        if family is MatrixFamily.COMPLEX_DISC:
            consecutive = all(isinstance(e, Integral) for e in exps) and exps == tuple(
                exps[0] + j for j in range(N)
            )
            if not (consecutive and exps[0] >= 0 and isinstance(M, Integral)):
                raise ValueError("complex disc test set needs consecutive non-negative integer exponents and integer M")
        elif family is MatrixFamily.FULL_CLOSED:
            for e in exps + (M,):
                if not ((isinstance(e, Integral) and e >= 0) or e >= N - 1):
                    raise ValueError(f"exponent {e} is outside Z_+ union [N-1, inf)")
        elif family is MatrixFamily.RANK_ONE_CLOSED:
            if exps[0] < 0:
                raise ValueError("closed rank-one test set needs non-negative exponents")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "exponents", exps)
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "cprime", _num(self.cprime))
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "testset", family)

    @property
    def N(self) -> int:
        return len(self.exponents)

    @property
    def exact(self) -> bool:
        return (
            all(is_rational(c) for c in self.coeffs)
            and exponents_are_integral(self.exponents)
            and isinstance(self.M, Integral)
            and is_rational(self.rho)
        )

    @property
    def consecutive(self) -> bool:
        n = self.exponents
        return exponents_are_integral(n) and n == tuple(n[0] + j for j in range(self.N))

    def with_cprime(self, cprime) -> "PreserverSpec":
        return replace(self, cprime=cprime)

    def h(self, x):
        return sum(c * _scalar_power(x, e) for c, e in zip(self.coeffs, self.exponents))

    def f(self, x):
        return self.h(x) + self.cprime * _scalar_power(x, self.M)

    def g(self, x):
        return self.h(x) - _scalar_power(x, self.M) / threshold_C(self)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["testset"] = self.testset.value
        return d


def _scalar_power(x, e):
    if e == 0:
        return 1
    return x**e


def threshold_C(spec: PreserverSpec):
    """Sharp constant ``C = sum_j (V(n_j)/V(n))^2 rho^(M-n_j) / c_j``.

    ``n_j`` is ``n`` with ``n_j`` removed and ``M`` appended. Exact
    (``Fraction``) for integer exponents with rational data.
    """
    n, M, rho = spec.exponents, spec.M, spec.rho
    exact = spec.exact
    vn = vandermonde(n)
    total = Fraction(0) if exact else 0.0
    for j, (cj, nj) in enumerate(zip(spec.coeffs, n)):
        n_j = n[:j] + n[j + 1 :] + (M,)
        ratio = vandermonde(n_j) / vn
        if exact and spec.consecutive:
            hook = hook_content_binomial(n[0], j, M, spec.N)
            if ratio != hook:
                raise RuntimeError(f"Vandermonde ratio {ratio} disagrees with hook-content value {hook}")
        if exact:
            total += Fraction(ratio) ** 2 * Fraction(rho) ** (M - nj) / Fraction(cj)
        else:
            total += float(ratio) ** 2 * float(rho) ** float(M - nj) / float(cj)
    return total


def hadamard_power(A, alpha) -> np.ndarray:
    """Entrywise power ``A^{o alpha}`` with ``0^0 = 1``."""
    arr = np.asarray(A)
    if arr.dtype == object:
        if not float(alpha).is_integer():
            raise ValueError("exact matrices need integer powers")
        return np.vectorize(lambda x: x ** int(alpha), otypes=[object])(arr)
    integral = float(alpha).is_integer()
    if np.iscomplexobj(arr):
        if not integral:
            raise ValueError("complex entries need an integer power")
        if alpha < 0:
            raise ValueError("negative powers are not supported")
        return arr ** int(alpha)
    arr = arr.astype(float)
    if not integral and np.any(arr < 0):
        raise ValueError(f"negative entries with non-integer power {alpha}")
    if alpha < 0 and np.any(arr == 0):
        raise ValueError("zero entries with negative power")
    if integral:
        return arr ** int(alpha)
    return arr ** float(alpha)


def apply_entrywise(func, A, *, part: str = "f") -> np.ndarray:
    """``func[A]`` for a callable or a :class:`PreserverSpec`.

    With a spec, ``part`` picks ``"f"``, ``"h"`` or ``"g"``.
    """
    arr = np.asarray(A)
    if isinstance(func, PreserverSpec):
        exact = arr.dtype == object
        cast = (lambda c: c) if exact else float
        out = sum(cast(c) * hadamard_power(arr, e) for c, e in zip(func.coeffs, func.exponents))
        if part == "h":
            return out
        if part == "f":
            extra = func.cprime
        elif part == "g":
            C = threshold_C(func)
            extra = -1 / C
        else:
            raise ValueError(f"unknown part {part!r}")
        if extra == 0:
            return out
        if not exact:
            extra = float(extra)
        return out + extra * hadamard_power(arr, func.M)
    if callable(func):
        otype = arr.dtype if arr.dtype in (object, complex) else float
        return np.vectorize(func, otypes=[otype])(arr)
    raise TypeError("func must be a PreserverSpec or a callable")


class JacobiTrudi(NamedTuple):
    lhs: object
    rhs: object


def jacobi_trudi_det(S, coeffs, u) -> JacobiTrudi:
    """Both sides of ``det F[u u*] = sum_{n} |det u^{o n}|^2 prod_{n in n} c_n``.

    ``S`` is a finite set of exponents, ``coeffs`` a mapping (or sequence
    aligned with ``sorted(S)``) of real coefficients. The left side is the
    determinant of the entrywise image; the right side enumerates the
    ``N``-subsets of ``S``.
    """
    S = tuple(sorted(S))
    S = check_exponents(S, name="S")
    if isinstance(coeffs, dict):
        c = {check_exponents((k,))[0]: v for k, v in coeffs.items()}
        cs = [c.get(s, 0) for s in S]
    else:
        cs = list(coeffs)
        if len(cs) != len(S):
            raise ValueError("coeffs must align with sorted(S)")
    u_list = list(u)
    N = len(u_list)
    if len(S) < N:
        raise ValueError(f"|S| = {len(S)} is smaller than N = {N}")
    exact = (
        all(is_rational(x) for x in u_list)
        and all(is_rational(x) for x in cs)
        and exponents_are_integral(S)
    )
    if exact:
        uf = [Fraction(x) for x in u_list]
        cf = [Fraction(x) for x in cs]
        rows = [
            [sum(ck * (uf[i] * uf[j]) ** int(s) for ck, s in zip(cf, S)) for j in range(N)]
            for i in range(N)
        ]
        lhs = det_fraction(rows)
        rhs = Fraction(0)
        for idx in itertools.combinations(range(len(S)), N):
            weight = math.prod(cf[i] for i in idx)
            if weight:
                d = gen_vandermonde_det(uf, tuple(S[i] for i in idx))
                rhs += d * d * weight
        return JacobiTrudi(lhs, rhs)
    uv = check_vector(u_list)
    A = np.outer(uv, uv.conj())
    F = sum(float(ck) * hadamard_power(A, s) for ck, s in zip(cs, S))
    lhs = np.linalg.det(F)
    lhs = float(lhs.real) if np.iscomplexobj(lhs) else float(lhs)
    rhs = 0.0
    for idx in itertools.combinations(range(len(S)), N):
        weight = math.prod(float(cs[i]) for i in idx)
        if weight:
            d = gen_vandermonde_det(list(uv), tuple(S[i] for i in idx))
            rhs += abs(d) ** 2 * weight
    return JacobiTrudi(lhs, rhs)


def _entry_tol(A, tol: ToleranceProfile) -> float:
    return tol.row_eq * (1.0 + float(np.max(np.abs(A))))


def check_test_matrix(spec: PreserverSpec, A, tol: ToleranceProfile = DEFAULT_TOL) -> np.ndarray:
    """Validate membership of ``A`` in the spec's test set and return it as an array."""
    arr = check_hermitian(A, allow_object=True)
    if arr.dtype == object:
        arr = arr.astype(float)
    family = spec.testset
    rho = float(spec.rho)
    slack = 1e-12 * max(1.0, rho)
    if not is_psd(arr, tol).psd:
        raise ValueError("matrix is not positive semidefinite")
    if family.real:
        if np.iscomplexobj(arr):
            raise ValueError(f"{family.value} needs a real matrix")
        if family is MatrixFamily.RANK_ONE_OPEN:
            if not (np.all(arr > 0) and np.all(arr < rho)):
                raise ValueError("entries must lie in the open interval (0, rho)")
        else:
            if np.any(arr < 0) or np.any(arr > rho + slack):
                raise ValueError("entries must lie in [0, rho]")
        if family.rank_one and numeric_rank(arr, tol) > 1:
            raise ValueError("matrix must have rank at most one")
    elif np.any(np.abs(arr) > rho + slack):
        raise ValueError("entries must lie in the closed disc of radius rho")
    return arr


class LMIVerdict(NamedTuple):
    holds: bool
    min_eig_g: float
    strict: bool
    equality: bool


def sharp_lmi_check(spec: PreserverSpec, A, tol: ToleranceProfile = DEFAULT_TOL) -> LMIVerdict:
    """Check ``A^{o M} <= C h[A]`` and report the spectrum floor of ``g[A]``."""
    arr = check_test_matrix(spec, A, tol)
    C = float(threshold_C(spec))
    H = apply_entrywise(spec, arr, part="h")
    P = hadamard_power(arr, spec.M)
    holds = loewner_geq(C * H, P, tol)
    G = H - P / C
    w = np.linalg.eigvalsh(G)
    scale = max(1.0, float(np.max(np.abs(np.linalg.eigvalsh(H)))))
    equality = bool(np.max(np.abs(G)) <= tol.psd_floor * scale)
    return LMIVerdict(bool(holds), float(w[0]), bool(is_pd(G, tol)), equality)


class DominationError(RuntimeError):
    """No admissible dominating vector found within the retry budget."""


def rows_distinct(A, tol: ToleranceProfile = DEFAULT_TOL) -> bool:
    arr = np.asarray(A)
    if arr.dtype == object:
        return len({tuple(row) for row in arr.tolist()}) == arr.shape[0]
    thr = _entry_tol(arr, tol)
    for i in range(arr.shape[0]):
        for j in range(i):
            if np.max(np.abs(arr[i] - arr[j])) <= thr:
                return False
    return True


def _zero_rows(arr, thr) -> np.ndarray:
    return np.all(np.abs(arr) <= thr, axis=1)


def _entries_distinct(u, gap) -> bool:
    u = np.asarray(u)
    for i in range(u.size):
        for j in range(i):
            if abs(u[i] - u[j]) <= gap:
                return False
    return True


def verify_domination(A, u, tol: ToleranceProfile = DEFAULT_TOL) -> bool:
    """``A >= u u*`` with distinct entries, zero exactly on the zero rows of ``A``."""
    arr = np.asarray(check_hermitian(A))
    u = np.asarray(u)
    thr = _entry_tol(arr, tol)
    zero_rows = _zero_rows(arr, thr)
    if not _entries_distinct(u, tol.row_eq):
        return False
    if np.any((np.abs(u) <= tol.row_eq) != zero_rows):
        return False
    return loewner_geq(arr, np.outer(u, u.conj()), tol)


def dominating_vector(
    A,
    random_state=None,
    tol: ToleranceProfile = DEFAULT_TOL,
    *,
    method: str = "auto",
    check_rows: bool = True,
    max_retries: int = 64,
) -> np.ndarray:
    """A vector ``u`` with distinct entries, ``A >= u u*``, and ``u_i = 0`` iff row ``i`` is zero.

    ``method="perron"`` (default for real matrices with non-negative
    entries) keeps ``u`` non-negative: split into irreducible components,
    perturb each block's Perron vector by a small convex combination of the
    other spectral vectors, then stack the blocks with decreasing scales.
    ``method="generic"`` takes ``w = A conj(v)`` for a random ``v`` and
    scales it into the cone.
    """
    arr = check_hermitian(A)
    if not is_psd(arr, tol).psd:
        raise ValueError("matrix is not positive semidefinite")
    if check_rows and not rows_distinct(arr, tol):
        raise ValueError("rows of A are not distinct")
    rng = check_random_state(random_state)
    nonneg = not np.iscomplexobj(arr) and np.all(arr >= 0)
    if method == "auto":
        method = "perron" if nonneg else "generic"
    if method == "perron":
        if not nonneg:
            raise ValueError("perron method needs a real matrix with non-negative entries")
        return _dominate_perron(arr, rng, tol, max_retries)
    if method == "generic":
        return _dominate_generic(arr, rng, tol, max_retries)
    raise ValueError(f"unknown method {method!r}")


def _dominate_block(B, rng, tol, max_retries) -> np.ndarray:
    w, Q = np.linalg.eigh(B)
    cut = tol.rank_gap * max(1.0, float(w[-1]))
    order = [i for i in np.argsort(w)[::-1] if w[i] > cut]
    vecs = [np.sqrt(w[i]) * Q[:, i] for i in order]
    perron = vecs[0]
    if perron.sum() < 0:
        perron = -perron
    if np.min(perron) <= 0:
        raise DominationError("Perron vector of an irreducible block is not positive")
    gap = tol.row_eq * (1.0 + float(np.max(perron)))
    others = vecs[1:]
    if not others or B.shape[0] == 1:
        if _entries_distinct(perron, gap):
            return perron
        raise DominationError("rank-one block has repeated entries")
    eps = float(np.min(perron)) / (2.0 * sum(float(np.max(np.abs(v))) for v in others))
    for _ in range(max_retries):
        c = rng.uniform(0.0, eps, size=len(others))
        psi = perron + sum(cj * v for cj, v in zip(c, others))
        if np.min(psi) > 0 and _entries_distinct(psi, gap):
            return psi / (1.0 + c.sum())
    raise DominationError(f"no admissible convex combination after {max_retries} draws")


def _dominate_perron(arr, rng, tol, max_retries) -> np.ndarray:
    N = arr.shape[0]
    thr = _entry_tol(arr, tol)
    zero_rows = _zero_rows(arr, thr)
    support = (arr > thr).astype(int)
    _, labels = connected_components(support, directed=False)
    blocks = []
    for lab in np.unique(labels):
        idx = np.flatnonzero(labels == lab)
        if len(idx) == 1 and zero_rows[idx[0]]:
            continue
        blocks.append((idx, _dominate_block(arr[np.ix_(idx, idx)], rng, tol, max_retries)))
    u = np.zeros(N)
    if len(blocks) == 1:
        idx, vec = blocks[0]
        u[idx] = vec
        return u
    mu, prev_min = 0.5, None
    for k, (idx, vec) in enumerate(blocks):
        if k > 0:
            mu = min(mu / 2.0, (prev_min / 2.0) / float(np.max(vec)))
        scaled = mu * vec
        u[idx] = scaled
        prev_min = float(np.min(scaled))
    return u


def _dominate_generic(arr, rng, tol, max_retries) -> np.ndarray:
    N = arr.shape[0]
    thr = _entry_tol(arr, tol)
    zero_rows = _zero_rows(arr, thr)
    complex_case = np.iscomplexobj(arr)
    w_eig, Q = np.linalg.eigh(arr)
    cut = tol.rank_gap * max(1.0, float(w_eig[-1]))
    keep = w_eig > cut
    pinv = (Q[:, keep] / w_eig[keep]) @ Q[:, keep].conj().T
    for _ in range(max_retries):
        v = rng.standard_normal(N)
        if complex_case:
            v = v + 1j * rng.standard_normal(N)
        w = arr @ v.conj()
        w[zero_rows] = 0
        gap = tol.row_eq * (1.0 + float(np.max(np.abs(w))))
        if np.any(np.abs(w[~zero_rows]) <= gap) or not _entries_distinct(w, gap):
            continue
        quad = float(np.real(w.conj() @ pinv @ w))
        if quad <= 0:
            continue
        u = np.sqrt(0.5 / quad) * w
        return u if complex_case else u.real
    raise DominationError(f"no admissible direction after {max_retries} draws")


@dataclass
class EquivalenceReport:
    has_dominating_vector: bool
    rows_distinct: bool
    h_pd: bool
    f_pd: bool
    in_top_stratum: bool
    witness: np.ndarray | None = None

    @property
    def flags(self) -> tuple[bool, ...]:
        return (self.has_dominating_vector, self.rows_distinct, self.h_pd, self.f_pd, self.in_top_stratum)

    @property
    def consistent(self) -> bool:
        return len(set(self.flags)) == 1

    def to_dict(self) -> dict:
        w = None
        if self.witness is not None:
            w = [[z.real, z.imag] if np.iscomplexobj(self.witness) else float(z) for z in self.witness]
        return {
            "hasDominatingVector": self.has_dominating_vector,
            "rowsDistinct": self.rows_distinct,
            "hPD": self.h_pd,
            "fPD": self.f_pd,
            "inTopStratum": self.in_top_stratum,
            "consistent": self.consistent,
            "witness": w,
        }


def equivalence_report(
    spec: PreserverSpec, A, tol: ToleranceProfile = DEFAULT_TOL, random_state=None
) -> EquivalenceReport:
    """Compute the five positive-definiteness conditions independently."""
    from .strata import partition_of

    arr = check_test_matrix(spec, A, tol)
    C = threshold_C(spec)
    if not spec.cprime > -1 / C:
        raise ValueError(f"need c' > -1/C = {-1 / C}, got {spec.cprime}")
    thr = _entry_tol(arr, tol)
    if np.any(_zero_rows(arr, thr)) and spec.exponents[0] != 0:
        raise ValueError("A has a zero row, which requires n_0 = 0")
    rng = check_random_state(random_state)

    witness = None
    try:
        method = "perron" if spec.testset.real else "generic"
        candidate = dominating_vector(arr, rng, tol, method=method, check_rows=False)
        if verify_domination(arr, candidate, tol):
            witness = candidate
    except DominationError:
        pass
    return EquivalenceReport(
        has_dominating_vector=witness is not None,
        rows_distinct=rows_distinct(arr, tol),
        h_pd=is_pd(apply_entrywise(spec, arr, part="h"), tol),
        f_pd=is_pd(apply_entrywise(spec, arr, part="f"), tol),
        in_top_stratum=len(partition_of(arr, tol).blocks) == arr.shape[0],
        witness=witness,
    )


@dataclass
class LoewnerReport:
    holds: bool
    min_values: list
    first_failure: dict | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def loewner_necessity_check(coeffs, N: int, rho=1.0, grid: int = 512) -> LoewnerReport:
    """Check ``f, f', ..., f^(N-1) >= 0`` on a grid of the open interval ``(0, rho)``.

    ``coeffs`` lists polynomial coefficients by increasing degree.
    """
    p = np.polynomial.Polynomial(np.asarray(coeffs, dtype=float))
    xs = np.linspace(0.0, float(rho), grid + 2)[1:-1]
    mins, failure = [], None
    for k in range(N):
        vals = p.deriv(k)(xs) if k else p(xs)
        mins.append(float(np.min(vals)))
        if failure is None and mins[-1] < 0:
            i = int(np.argmin(vals))
            failure = {"derivative": k, "x": float(xs[i]), "value": float(vals[i])}
    return LoewnerReport(failure is None, mins, failure)


def quadratic_threshold_comparison(c0, c1) -> dict:
    """Three lower bounds on ``c'`` for ``c0 + c1 x + c' x^2`` on 2x2 matrices over ``(0, 1)``."""
    spec = PreserverSpec((c0, c1), (0, 1), 2, rho=1, testset=MatrixFamily.RANK_ONE_OPEN)
    C = threshold_C(spec)
    return {
        "C": C,
        "sharp_bound": -1 / C,
        "remark_bound": Fraction(-c0 * c1) / (4 * c0 + 2 * c1) if spec.exact else -c0 * c1 / (4 * c0 + 2 * c1),
        "loewner_bound": -Fraction(c1) / 2 if is_rational(c1) else -c1 / 2,
    }


@dataclass
class SharpnessReport:
    min_eig: float
    witness: np.ndarray | None
    cprime: float
    evaluated: int
    certified: bool | None = None
    notes: list = field(default_factory=list)

    def found(self, threshold: float = 0.0) -> bool:
        return self.min_eig < -threshold

    def to_dict(self) -> dict:
        return {
            "min_eig": self.min_eig,
            "witness": None if self.witness is None else [float(x) for x in self.witness],
            "cprime": self.cprime,
            "evaluated": self.evaluated,
            "certified": self.certified,
        }


def _rank_one_grid(N: int, rho: float, grid: int, family: MatrixFamily) -> np.ndarray:
    offsets = np.geomspace(1e-4, 0.999, grid)
    coords = np.sqrt(rho) * (1.0 - offsets)
    pts = np.array(list(itertools.combinations(coords, N))) if N > 1 else coords[:, None]
    qs = 1.0 - offsets
    geo = coords[0] * qs[:, None] ** np.arange(N)[None, :]
    pts = np.vstack([pts, geo])
    if family is MatrixFamily.RANK_ONE_CLOSED or family is MatrixFamily.FULL_CLOSED:
        if N > 1:
            edge = np.array(list(itertools.combinations(coords, N - 1)))
            pts = np.vstack([pts, np.hstack([np.zeros((len(edge), 1)), edge])])
    return pts


def _certify_rank_one(spec: PreserverSpec, u: np.ndarray, cprime) -> bool:
    exps = spec.exponents + (spec.M,)
    cs = list(spec.coeffs) + [cprime]
    if exponents_are_integral(exps):
        uf = [Fraction(float(x)) for x in u]
        cf = [Fraction(c) if is_rational(c) else Fraction(float(c)) for c in cs]
        N = len(uf)
        rows = [
            [sum(c * (uf[i] * uf[j]) ** int(e) for c, e in zip(cf, exps)) for j in range(N)]
            for i in range(N)
        ]
        return exact_not_psd(rows)
    with mpmath.workdps(50):
        uv = [mpmath.mpf(float(x)) for x in u]
        N = len(uv)
        F = mpmath.matrix(N, N)
        for i in range(N):
            for j in range(N):
                x = uv[i] * uv[j]
                F[i, j] = sum(
                    mpmath.mpf(float(c)) * (x ** mpmath.mpf(float(e)) if e else 1) for c, e in zip(cs, exps)
                )
        return bool(min(mpmath.eigsy(F, eigvals_only=True)) < 0)


def sharpness_search(
    spec: PreserverSpec, grid: int = 64, *, certify: bool = True, chunk: int = 20000
) -> SharpnessReport:
    """Rank-one grid search for the most negative eigenvalue of ``f[u u^T]``.

    Coordinates are ``sqrt(rho) (1 - t)`` with ``t`` log-spaced towards the
    corner ``sqrt(rho) 1``; geometric-progression (Hankel) vectors are
    included. The best witness is re-checked in exact (integer exponents)
    or 50-digit arithmetic when ``certify`` is set.
    """
    rho = float(spec.rho)
    pts = _rank_one_grid(spec.N, rho, grid, spec.testset)
    cs = [float(c) for c in spec.coeffs]
    cp = float(spec.cprime)
    best_val, best_u = np.inf, None
    for start in range(0, len(pts), chunk):
        U = pts[start : start + chunk]
        A = U[:, :, None] * U[:, None, :]
        F = sum(c * A**e for c, e in zip(cs, spec.exponents)) + cp * A**spec.M
        w = np.linalg.eigvalsh(F)[:, 0]
        i = int(np.argmin(w))
        if w[i] < best_val:
            best_val, best_u = float(w[i]), U[i].copy()
    report = SharpnessReport(best_val, best_u, cp, len(pts))
    if certify and best_val < 0:
        report.certified = _certify_rank_one(spec, best_u, spec.cprime)
    return report
