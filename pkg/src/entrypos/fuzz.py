"""Randomized invariant suites.

Each suite draws one instance per call from its own generator and returns
``(ok, detail)``. :func:`run_fuzz` spawns an independent seed per
``(suite, index)`` pair, so results do not depend on the worker count.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Callable

import numpy as np

from . import sampling
from .linalg import DEFAULT_TOL
from .preserver import (
    MatrixFamily,
    PreserverSpec,
    dominating_vector,
    jacobi_trudi_det,
    sharpness_search,
    threshold_C,
    verify_domination,
)
from .rayleigh import c_R, c_R_rank_one
from .strata import inflate, rank_on_stratum
from .symfunc import monotonicity_certify

__all__ = ["SUITES", "run_fuzz", "run_instance"]


def _jacobi_trudi(rng, inject):
    N = int(rng.integers(1, 4))
    size = int(rng.integers(N, N + 3))
    S = sorted(int(x) for x in rng.choice(np.arange(0, 8), size=size, replace=False))
    coeffs = [Fraction(int(rng.integers(1, 9)), int(rng.integers(1, 5))) for _ in S]
    u = sampling.rational_vector(rng, N, denom=6, low=-1, high=1, distinct=False)
    res = jacobi_trudi_det(S, coeffs, u)
    detail = {"S": S, "u": [str(x) for x in u], "lhs": str(res.lhs), "rhs": str(res.rhs)}
    return res.lhs == res.rhs, detail


def _sharpness(rng, inject):
    N = int(rng.integers(2, 4)) if not inject else 2
    spec = sampling.random_spec(rng, N, MatrixFamily.RANK_ONE_OPEN, top=4, zero_first=bool(rng.random() < 0.5))
    C = threshold_C(spec)
    frac = Fraction(-101, 100) if inject else Fraction(-99, 100)
    spec = spec.with_cprime(frac / C)
    report = sharpness_search(spec, grid=64 if N == 2 else 32)
    found = bool(report.found() and report.certified)
    detail = {"c": [str(c) for c in spec.coeffs], "n": list(spec.exponents), "M": spec.M, **report.to_dict()}
    return not found, detail


def _domination(rng, inject):
    N = int(rng.integers(2, 6))
    if rng.random() < 0.5:
        A = sampling.reducible_nonneg_psd(rng, N, zero_row=bool(rng.random() < 0.3))
    else:
        A = sampling.complex_psd(rng, N, rank=int(rng.integers(1, N + 1)))
    u = dominating_vector(A, rng)
    resid = float(np.linalg.eigvalsh(A - np.outer(u, u.conj()))[0])
    return verify_domination(A, u), {"N": N, "residual_min_eig": resid, "complex": bool(np.iscomplexobj(A))}


def _strata_rank(rng, inject):
    N = 6
    pi = sampling.random_partition(rng, N)
    core = sampling.distinct_row_core(rng, len(pi))
    A = inflate(core, pi)
    spec = sampling.random_spec(rng, N, MatrixFamily.FULL_CLOSED, top=7)
    diag = rank_on_stratum(spec, A)
    ok = diag.rank_f == diag.rank_h == len(pi)
    return ok, {"blocks": diag.partition.to_dict()["blocks"], "rankF": diag.rank_f, "rankH": diag.rank_h}


def _rayleigh_agreement(rng, inject):
    N = int(rng.integers(1, 4))
    exps = sampling.random_exponents(rng, N, top=4, zero_first=True)
    coeffs = tuple(float(x) for x in rng.uniform(0.5, 2.0, size=N))
    M = exps[-1] + int(rng.integers(1, 3))
    u = sampling.distinct_sorted(rng, N, 0.05, 1.0, 0.1)
    closed = c_R_rank_one(u, coeffs, exps, M, dps=40)
    spectral = c_R(np.outer(u, u), coeffs, exps, M)
    rel = abs(closed - spectral) / max(abs(closed), 1e-300)
    return rel <= 1e-8, {"u": u.tolist(), "n": list(exps), "M": M, "closed": closed, "spectral": spectral, "rel": rel}


def _monotonicity(rng, inject):
    N = int(rng.integers(1, 4))
    while True:
        m = tuple(sorted(int(x) for x in rng.choice(np.arange(0, 6), size=N, replace=False)))
        n = tuple(sorted(int(x) for x in rng.choice(np.arange(0, 8), size=N, replace=False)))
        if m != n and all(a <= b for a, b in zip(m, n)):
            break
    report = monotonicity_certify(m, n, 1, random_state=rng, chains=8, steps=4)
    return report.passed, {"m": list(m), "n": list(n), "min_difference": str(report.min_difference)}


SUITES: dict[str, Callable] = {
    "jacobi-trudi": _jacobi_trudi,
    "sharpness": _sharpness,
    "domination": _domination,
    "strata-rank": _strata_rank,
    "rayleigh-agreement": _rayleigh_agreement,
    "monotonicity": _monotonicity,
}


def run_instance(seed: int, suite: str, index: int, inject: bool = False):
    """Run instance ``index`` of ``suite``; exceptions count as failures."""
    position = list(SUITES).index(suite)
    rng = np.random.default_rng(np.random.SeedSequence([seed, position, index]))
    try:
        ok, detail = SUITES[suite](rng, inject and suite == "sharpness")
    except Exception as exc:  # a crash is a failed instance, reported with its message
        ok, detail = False, {"error": f"{type(exc).__name__}: {exc}"}
    return bool(ok), detail


def _run_packed(args):
    return run_instance(*args)


def run_fuzz(seed: int, budget: int, suites=("all",), *, inject_violation: bool = False, workers: int = 1) -> dict:
    """Run ``budget`` instances of each selected suite and summarize.

    The summary maps each suite to its pass/fail counts and the first
    failing instance (by index).
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be a 64-bit unsigned value")
    names = list(SUITES) if "all" in suites else list(suites)
    unknown = [s for s in names if s not in SUITES]
    if unknown:
        raise ValueError(f"unknown suites {unknown}; choose from {sorted(SUITES)}")
    jobs = [(seed, s, i, inject_violation) for s in names for i in range(budget)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_packed, jobs))
    else:
        results = [_run_packed(j) for j in jobs]
    summary = {}
    for (_, suite, index, _), (ok, detail) in zip(jobs, results):
        entry = summary.setdefault(suite, {"passed": 0, "failed": 0, "first_counterexample": None})
        if ok:
            entry["passed"] += 1
        else:
            entry["failed"] += 1
            if entry["first_counterexample"] is None:
                entry["first_counterexample"] = {"index": index, **detail}
    return {
        "seed": seed,
        "budget": budget,
        "inject_violation": inject_violation,
        "suites": summary,
        "all_passed": all(e["failed"] == 0 for e in summary.values()),
    }
