"""Schur polynomials, generalized Vandermonde determinants and ratio monotonicity.

Exact results (``Fraction``) are returned whenever every input is rational
and the exponents are integers; otherwise the float path is used.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, NamedTuple

import mpmath
import numpy as np

from ._exact import det_fraction
from .linalg import DEFAULT_TOL, ToleranceProfile
from .validation import (
    check_exponents,
    check_random_state,
    exponents_are_integral,
    is_rational,
)

__all__ = [
    "DomainError",
    "BudgetExceeded",
    "TableauSum",
    "MonotonicityReport",
    "vandermonde",
    "gen_vandermonde_det",
    "shape_from_exponents",
    "iter_ssyt",
    "schur_bialternant",
    "schur_tableaux",
    "schur_principal_specialization",
    "hook_content_binomial",
    "schur_ratio",
    "ratio_upper_bound",
    "zero_prefix_length",
    "boundary_strict_k",
    "monotonicity_certify",
]

DEFAULT_BUDGET = 10**6


class DomainError(ValueError):
    """Point outside the domain on which a ratio is defined."""


class BudgetExceeded(RuntimeError):
    """Tableau enumeration exceeded its configured budget."""


class TableauSum(NamedTuple):
    value: object
    count: int


def _exact_inputs(values) -> bool:
    return all(is_rational(v) for v in values)


def vandermonde(m):
    """``prod_{k<l} (m_l - m_k)``; exact for rational entries.

    >>> vandermonde((0, 2, 3))
    Fraction(6, 1)
    """
    m = tuple(m)
    if _exact_inputs(m):
        out = Fraction(1)
        for k in range(len(m)):
            for l in range(k + 1, len(m)):
                out *= Fraction(m[l]) - Fraction(m[k])
        return out
    out = 1.0
    for k in range(len(m)):
        for l in range(k + 1, len(m)):
            out *= m[l] - m[k]
    return out


def _power(x, e):
    # 0^0 := 1
    if e == 0:
        return Fraction(1) if is_rational(x) else 1.0
    if is_rational(x) and isinstance(e, int):
        return Fraction(x) ** e
    if isinstance(x, complex) or np.iscomplexobj(x):
        if not float(e).is_integer():
            raise ValueError("complex base requires an integer exponent")
        return complex(x) ** int(e)
    x = float(x)
    if x < 0 and not float(e).is_integer():
        raise ValueError(f"negative base {x} with non-integer exponent {e}")
    if x == 0 and e < 0:
        raise ValueError("zero base with negative exponent")
    return x ** float(e)


def _power_matrix(u, n):
    return [[_power(ui, nj) for nj in n] for ui in u]


def gen_vandermonde_det(u, n, *, dps: int | None = None):
    """``det (u_i^{n_j})`` with the convention ``0^0 = 1``.

    Exact when ``u`` is rational and ``n`` integral. With ``dps`` set the
    determinant is evaluated by mpmath at that many decimal digits and
    returned as a float, which keeps nearly coincident coordinates usable.
    """
    n = check_exponents(n)
    u = list(u)
    if len(u) != len(n):
        raise ValueError(f"need {len(n)} coordinates, got {len(u)}")
    if _exact_inputs(u) and exponents_are_integral(n):
        return det_fraction(_power_matrix(u, n))
    # validates bases and exponents on the float path
    mat = _power_matrix(u, n)
    if dps is not None:
        with mpmath.workdps(dps):
            rows = [[_mp_power(ui, nj) for nj in n] for ui in u]
            return float(mpmath.det(mpmath.matrix(rows)))
    arr = np.array(mat, dtype=complex if any(isinstance(v, complex) for r in mat for v in r) else float)
    return np.linalg.det(arr).item()


def _mp_power(x, e):
    if e == 0:
        return mpmath.mpf(1)
    x = mpmath.mpf(x) if not is_rational(x) else mpmath.mpf(Fraction(x).numerator) / Fraction(x).denominator
    e = mpmath.mpf(e) if not is_rational(e) else mpmath.mpf(Fraction(e).numerator) / Fraction(e).denominator
    return x**e


def shape_from_exponents(n) -> tuple[int, ...]:
    """Partition ``lambda`` with ``lambda_i = n_{N-i} - (N-i)``, zeros dropped."""
    n = check_exponents(n, integer=True)
    lam = [nj - j for j, nj in enumerate(n)][::-1]
    return tuple(x for x in lam if x > 0)


def iter_ssyt(shape, N: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Semistandard Young tableaux of ``shape`` with entries in ``1..N``.

    Backtracking over cells in row-major order: rows weakly increase,
    columns strictly increase. Tableaux come out in lexicographic order of
    their row words.
    """
    shape = tuple(int(x) for x in shape if x > 0)
    if any(b > a for a, b in zip(shape, shape[1:])):
        raise ValueError(f"shape {shape} is not weakly decreasing")
    if len(shape) > N:
        return
    cells = [(r, c) for r, length in enumerate(shape) for c in range(length)]
    col_height = [sum(1 for length in shape if length > c) for c in range(shape[0])] if shape else []
    grid = [[0] * length for length in shape]

    def fill(pos: int):
        if pos == len(cells):
            yield tuple(tuple(row) for row in grid)
            return
        r, c = cells[pos]
        lo = 1
        if c > 0:
            lo = grid[r][c - 1]
        if r > 0:
            lo = max(lo, grid[r - 1][c] + 1)
        # room for the cells still below in this column
        hi = N - (col_height[c] - r - 1)
        for v in range(lo, hi + 1):
            grid[r][c] = v
            yield from fill(pos + 1)
        grid[r][c] = 0

    yield from fill(0)


@lru_cache(maxsize=4096)
def _monomials(n: tuple, budget: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    N = len(n)
    contents: Counter = Counter()
    count = 0
    for tab in iter_ssyt(shape_from_exponents(n), N):
        count += 1
        if count > budget:
            raise BudgetExceeded(f"more than {budget} tableaux for exponents {n}")
        weight = [0] * N
        for row in tab:
            for v in row:
                weight[v - 1] += 1
        contents[tuple(weight)] += 1
    return tuple(sorted(contents.items()))


def _eval_monomials(monos, u):
    exact = _exact_inputs(u)
    total = Fraction(0) if exact else 0.0
    for weight, mult in monos:
        term = Fraction(mult) if exact else float(mult)
        for ui, t in zip(u, weight):
            if t:
                term *= (Fraction(ui) if exact else ui) ** t
        total += term
    return total


def schur_tableaux(u, n, *, budget: int = DEFAULT_BUDGET) -> TableauSum:
    """Littlewood sum ``sum_t u^t`` over SSYT of shape ``n - delta``.

    The reported count equals ``V(n)/V(delta)``.
    """
    n = check_exponents(n, integer=True)
    u = list(u)
    if len(u) != len(n):
        raise ValueError(f"need {len(n)} coordinates, got {len(u)}")
    monos = _monomials(n, budget)
    count = sum(mult for _, mult in monos)
    return TableauSum(_eval_monomials(monos, u), count)


def _distinct(u) -> bool:
    return len(set(u)) == len(u)


def schur_bialternant(u, n, *, budget: int = DEFAULT_BUDGET):
    """``det(u^{n}) / V(u)``, falling back to the tableau sum on repeated coordinates."""
    n = check_exponents(n, integer=True)
    u = list(u)
    if len(u) != len(n):
        raise ValueError(f"need {len(n)} coordinates, got {len(u)}")
    if not _distinct(u):
        return schur_tableaux(u, n, budget=budget).value
    num = gen_vandermonde_det(u, n)
    den = gen_vandermonde_det(u, tuple(range(len(n))))
    return num / den


def schur_principal_specialization(n, q, N: int | None = None, *, budget: int = DEFAULT_BUDGET):
    """``s_n(1, q, ..., q^{N-1})`` by the product formula.

    ``q = 1`` returns the limit ``V(n)/V(delta)``; other values that make a
    denominator vanish fall back to the tableau sum.
    """
    n = check_exponents(n, integer=True)
    if N is None:
        N = len(n)
    if N != len(n):
        raise ValueError(f"N={N} does not match len(n)={len(n)}")
    exact = is_rational(q)
    qv = Fraction(q) if exact else q
    if qv == 0:
        raise ValueError("q must be non-zero")
    if qv == 1:
        return vandermonde(n) / vandermonde(tuple(range(N)))
    num = Fraction(1) if exact else 1.0
    den = Fraction(1) if exact else 1.0
    for k in range(N):
        for l in range(k + 1, N):
            num *= qv ** n[l] - qv ** n[k]
            den *= qv**l - qv**k
    if den == 0:
        return schur_tableaux([qv**i for i in range(N)], n, budget=budget).value
    return num / den


def hook_content_binomial(n0: int, j: int, M: int, N: int) -> int:
    """``V(n_j)/V(n)`` for consecutive exponents ``n = n0 + delta``.

    Equals ``C(M', j) * C(M'-j-1, N-j-1)`` with ``M' = M - n0``; for
    ``n0 = 0`` this is the textbook hook-content product.
    """
    for name, v in (("n0", n0), ("j", j), ("M", M), ("N", N)):
        if not isinstance(v, (int, np.integer)) or isinstance(v, bool):
            raise ValueError(f"{name} must be an integer")
    if N < 1 or not 0 <= j <= N - 1:
        raise ValueError(f"need 0 <= j <= N-1, got j={j}, N={N}")
    if n0 < 0 or M <= n0 + N - 1:
        raise ValueError(f"need M > n0 + N - 1, got M={M}, n0={n0}, N={N}")
    shift = M - n0
    return math.comb(shift, j) * math.comb(shift - j - 1, N - j - 1)


def zero_prefix_length(n) -> int:
    """Number of zero entries of ``n - delta`` (they form a prefix)."""
    k = 0
    for j, nj in enumerate(n):
        if nj != j:
            break
        k += 1
    return k


def boundary_strict_k(m, n, reading: str = "intended") -> int | None:
    """Boundary parameter ``k`` for strict monotonicity on ``U_k``.

    ``reading="intended"`` requires ``m_j = n_j = j`` for ``j < k`` and
    ``m_k, n_k > k``; returns ``None`` when no such ``k`` exists.
    ``reading="literal"`` only constrains ``m`` (the hypothesis as printed).
    """
    m = check_exponents(m, integer=True, name="m")
    n = check_exponents(n, integer=True, name="n")
    if reading == "literal":
        return zero_prefix_length(m)
    if reading != "intended":
        raise ValueError(f"unknown reading {reading!r}")
    k = 0
    while k < len(m) and m[k] == k and n[k] == k:
        k += 1
    if k < len(m) and not (m[k] > k and n[k] > k):
        return None
    return k


def _check_comparable(m, n):
    if len(m) != len(n):
        raise ValueError("tuples must have equal length")
    if any(a > b for a, b in zip(m, n)):
        raise ValueError(f"need m <= n componentwise, got m={m}, n={n}")


def schur_ratio(u, m, n, *, dps: int | None = None, budget: int = DEFAULT_BUDGET):
    """``det u^{n} / det u^{m}`` (equivalently ``s_n(u)/s_m(u)`` for integer tuples).

    Integer tuples: defined on ``u >= 0`` with at most ``k`` zero
    coordinates, ``k`` the number of zeros of ``m - delta``. Zero
    coordinates are removed by passing to truncated tuples.
    Real tuples: ``u`` positive with distinct coordinates, or one zero
    coordinate when ``m_0 = n_0 = 0``.
    """
    m = check_exponents(m, name="m")
    n = check_exponents(n, name="n")
    _check_comparable(m, n)
    u = list(u)
    if len(u) != len(n):
        raise ValueError(f"need {len(n)} coordinates, got {len(u)}")
    if any((not is_rational(x) and not np.isreal(x)) or x < 0 for x in u):
        raise DomainError("coordinates must be real and non-negative")
    zeros = [i for i, x in enumerate(u) if x == 0]
    integer = exponents_are_integral(m) and exponents_are_integral(n) and m[0] >= 0
    if integer:
        k = zero_prefix_length(m)
        if len(zeros) > k:
            raise DomainError(
                f"{len(zeros)} zero coordinates but m - delta has only {k} zeros"
            )
        l = len(zeros)
        if zero_prefix_length(n) < l:
            return Fraction(0) if _exact_inputs(u) else 0.0
        rest = [x for x in u if x != 0]
        n_red = tuple(x - l for x in n[l:])
        m_red = tuple(x - l for x in m[l:])
        if not rest:
            return Fraction(1) if _exact_inputs(u) else 1.0
        num = schur_tableaux(rest, n_red, budget=budget).value
        den = schur_tableaux(rest, m_red, budget=budget).value
        return num / den
    if not _distinct(u):
        raise DomainError("real exponents need distinct coordinates")
    if zeros:
        if not (m[0] == 0 and n[0] == 0):
            raise DomainError("a zero coordinate needs m_0 = n_0 = 0")
        rest = [x for x in u if x != 0]
        m, n, u = m[1:], n[1:], rest
        if not u:
            return 1.0
    return gen_vandermonde_det(u, n, dps=dps) / gen_vandermonde_det(u, m, dps=dps)


def ratio_upper_bound(m, n, rho):
    """``rho^{|n-m|/2} V(n)/V(m)``, the supremum of the ratio on ``(0, sqrt(rho)]^N``."""
    m = check_exponents(m, name="m")
    n = check_exponents(n, name="n")
    _check_comparable(m, n)
    excess = sum(n) - sum(m)
    vr = vandermonde(n) / vandermonde(m)
    if is_rational(rho) and _exact_inputs(m + n):
        half = Fraction(excess) / 2
        if half.denominator == 1:
            return Fraction(rho) ** int(half) * vr
        root = math.isqrt(Fraction(rho).numerator), math.isqrt(Fraction(rho).denominator)
        if Fraction(root[0], root[1]) ** 2 == Fraction(rho):
            return Fraction(root[0], root[1]) ** int(excess) * vr
    return float(rho) ** (float(excess) / 2) * float(vr)


@dataclass
class MonotonicityReport:
    m: tuple
    n: tuple
    rho: float
    exact: bool
    chains: int
    evaluations: int = 0
    min_difference: object = None
    violation: bool = False
    non_strict: bool = False
    bound: object = None
    max_ratio: object = None
    bound_ok: bool = True
    boundary_k: int = 0
    first_violation: dict | None = None
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violation and not self.non_strict and self.bound_ok

    def to_dict(self) -> dict:
        def enc(x):
            return str(x) if isinstance(x, Fraction) else x

        return {
            "m": list(self.m),
            "n": list(self.n),
            "rho": self.rho,
            "exact": self.exact,
            "chains": self.chains,
            "evaluations": self.evaluations,
            "min_difference": enc(self.min_difference),
            "min_difference_float": None if self.min_difference is None else float(self.min_difference),
            "violation": self.violation,
            "non_strict": self.non_strict,
            "bound": enc(self.bound),
            "max_ratio": enc(self.max_ratio),
            "bound_ok": self.bound_ok,
            "boundary_k": self.boundary_k,
            "first_violation": self.first_violation,
            "passed": self.passed,
        }


def _rational_sqrt_floor(rho, denom: int = 4096) -> Fraction:
    s = Fraction(math.sqrt(float(rho))).limit_denominator(denom)
    while s * s > Fraction(rho):
        s -= Fraction(1, denom)
    return s


def monotonicity_certify(
    m,
    n,
    rho=1,
    *,
    random_state=None,
    chains: int = 100,
    steps: int = 6,
    exact: bool | None = None,
    boundary_reading: str | None = "intended",
    base_points=None,
    tol: ToleranceProfile = DEFAULT_TOL,
    dps: int = 30,
) -> MonotonicityReport:
    """Sample increasing chains in one coordinate and inspect forward differences.

    A difference below ``-strict_margin`` (or ``< 0`` in exact mode) is a
    violation; one below ``+strict_margin`` (``<= 0`` exact) marks the
    ratio as non-strict. Every evaluated point also checks the upper bound
    ``ratio_upper_bound(m, n, rho)``.

    For integer tuples, base points may carry up to ``k`` zero coordinates,
    ``k = boundary_strict_k(m, n, boundary_reading)``; pass
    ``boundary_reading=None`` to stay in the open orthant. Real tuples with
    ``m_0 = n_0 = 0`` may place one coordinate at zero.
    """
    m = check_exponents(m, name="m")
    n = check_exponents(n, name="n")
    _check_comparable(m, n)
    if m == n:
        raise ValueError("m and n must be distinct")
    rng = check_random_state(random_state)
    N = len(n)
    integer = exponents_are_integral(m) and exponents_are_integral(n) and m[0] >= 0
    if exact is None:
        exact = integer
    if exact and not integer:
        raise ValueError("exact mode needs integer exponent tuples")
    if boundary_reading is None:
        k = 0
    elif integer:
        k = boundary_strict_k(m, n, boundary_reading) or 0
    else:
        k = 1 if (m[0] == 0 and n[0] == 0) else 0
    bound = ratio_upper_bound(m, n, rho)
    bound_f = float(bound)
    report = MonotonicityReport(m, n, float(rho), bool(exact), chains, bound=bound, boundary_k=k)
    top = _rational_sqrt_floor(rho) if exact else math.sqrt(float(rho))

    def draw():
        if exact:
            return Fraction(int(rng.integers(1, 4096)), 4096) * top
        return float(rng.uniform(0.02, 1.0)) * top

    def evaluate(point):
        value = schur_ratio(point, m, n, dps=None if integer else dps)
        report.evaluations += 1
        vf = float(value)
        if report.max_ratio is None or vf > float(report.max_ratio):
            report.max_ratio = value
        if vf > bound_f * (1 + 1e-12) + tol.strict_margin:
            report.bound_ok = False
        return value

    if base_points is not None:
        bases = [list(p) for p in base_points]
        for p in bases:
            schur_ratio(p, m, n)  # raises DomainError outside the domain
    else:
        bases = []
        for _ in range(chains):
            point = [draw() for _ in range(N)]
            while not _distinct(point):
                point = [draw() for _ in range(N)]
            zeros = int(rng.integers(0, k + 1)) if k else 0
            for idx in rng.choice(N, size=zeros, replace=False):
                point[int(idx)] = Fraction(0) if exact else 0.0
            bases.append(point)
    report.chains = len(bases)

    for point in bases:
        i = int(rng.integers(N))
        start = point[i]
        if exact:
            ticks = sorted({int(t) for t in rng.integers(1, 4096, size=steps)})
            span = top - Fraction(start)
            values = [Fraction(start)] + [Fraction(start) + span * Fraction(t, 4096) for t in ticks]
        else:
            ticks = np.sort(rng.uniform(0.0, 1.0, size=steps))
            values = [start] + [start + (top - start) * float(t) for t in ticks]
        chain = []
        for v in values:
            trial = list(point)
            trial[i] = v
            if not integer and not _distinct(trial):
                continue
            if chain and v == chain[-1][0]:
                continue
            chain.append((v, evaluate(trial)))
        for (v0, r0), (v1, r1) in zip(chain, chain[1:]):
            diff = r1 - r0
            if report.min_difference is None or diff < report.min_difference:
                report.min_difference = diff
            bad = diff < 0 if exact else diff < -tol.strict_margin
            weak = diff <= 0 if exact else diff < tol.strict_margin
            if bad and not report.violation:
                report.violation = True
                report.first_violation = {
                    "point": [str(x) for x in point],
                    "coordinate": i,
                    "from": str(v0),
                    "to": str(v1),
                    "difference": str(diff),
                }
            if weak:
                report.non_strict = True
    return report
