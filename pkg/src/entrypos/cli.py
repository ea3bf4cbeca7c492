"""Command-line front end.

Exit status: 0 on success, 2 on invalid input, 3 when a checking
subcommand finds a property violation (its report is still printed).
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import json
import sys
from fractions import Fraction

import numpy as np

from . import io
from .fuzz import SUITES, run_fuzz
from .linalg import DEFAULT_TOL
from .preserver import (
    DominationError,
    PreserverSpec,
    dominating_vector,
    equivalence_report,
    sharpness_search,
    threshold_C,
    verify_domination,
)
from .rayleigh import continuity_probe, equality_gap, inflated_path
from .sampling import distinct_row_core
from .strata import partition_of, rank_on_stratum
from .symfunc import (
    DomainError,
    monotonicity_certify,
    schur_bialternant,
    schur_principal_specialization,
    schur_tableaux,
)
from .validation import check_random_state

EXIT_OK, EXIT_INPUT, EXIT_VIOLATION = 0, 2, 3


class _Violation(Exception):
    def __init__(self, payload):
        super().__init__("property violation")
        self.payload = payload


def _jsonify(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonify(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, Fraction):
        return io.number_to_json(obj) if obj.denominator != 1 else int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def _exact_field(value) -> dict:
    """Exact string plus a decimal companion."""
    if isinstance(value, Fraction) or isinstance(value, int):
        f = Fraction(value)
        text = str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
        return {"value": text, "decimal": float(f), "exact": True}
    return {"value": repr(float(value)), "decimal": float(value), "exact": False}


def _csv_rows(obj, prefix=""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _csv_rows(obj[k], f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list) and any(isinstance(v, (list, dict)) for v in obj):
        for i, v in enumerate(obj):
            yield from _csv_rows(v, f"{prefix}[{i}]")
    else:
        yield prefix, json.dumps(obj) if isinstance(obj, list) else obj


def _emit(payload, fmt: str, out) -> None:
    payload = _jsonify(payload)
    if fmt == "csv":
        buf = _io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["key", "value"])
        for key, value in _csv_rows(payload):
            writer.writerow([key, value])
        out.write(buf.getvalue())
    else:
        out.write(json.dumps(payload, sort_keys=True) + "\n")


def _list(text: str):
    try:
        return [io.parse_number(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ValueError(f"cannot parse list {text!r}: {exc}") from None


def _tol(args):
    return DEFAULT_TOL.replace(psd_floor=args.tol_psd, rank_gap=args.tol_rank)


def _spec(args) -> PreserverSpec:
    if getattr(args, "spec", None):
        spec = io.load_spec(args.spec)
        if args.cprime is not None:
            spec = spec.with_cprime(io.parse_number(args.cprime))
        return spec
    if args.c is None or args.n is None or args.M is None:
        raise ValueError("give --spec or all of --c, --n and --M")
    return PreserverSpec(
        tuple(_list(args.c)),
        tuple(_list(args.n)),
        io.parse_number(args.M),
        io.parse_number(args.cprime) if args.cprime is not None else 0,
        args.testset,
        io.parse_number(args.rho),
    )


def _matrix(args):
    if not args.matrix:
        raise ValueError("--matrix is required")
    return io.load_matrix(args.matrix)


def cmd_threshold(args):
    spec = _spec(args)
    C = threshold_C(spec)
    c, neg = _exact_field(C), _exact_field(-1 / C)
    return {
        "C": c["value"],
        "C_decimal": c["decimal"],
        "neg_inv": neg["value"],
        "neg_inv_decimal": neg["decimal"],
        "exact": c["exact"],
    }


def cmd_certify(args):
    spec = _spec(args)
    report = equivalence_report(spec, _matrix(args), _tol(args), args.seed)
    payload = report.to_dict()
    if not report.consistent:
        raise _Violation(payload)
    return payload


def cmd_dominate(args):
    A = _matrix(args)
    if A.dtype == object:
        A = A.astype(float)
    try:
        u = dominating_vector(A, args.seed, _tol(args), method=args.method)
    except DominationError as exc:
        raise _Violation({"error": str(exc), "u": None}) from None
    resid = float(np.linalg.eigvalsh(A - np.outer(u, u.conj()))[0])
    payload = {"u": io.vector_to_json(u), "residual_min_eig": resid, "verified": verify_domination(A, u, _tol(args))}
    if not payload["verified"]:
        raise _Violation(payload)
    return payload


def cmd_sharpness(args):
    spec = _spec(args)
    report = sharpness_search(spec, grid=args.grid)
    payload = report.to_dict()
    C = threshold_C(spec)
    payload["threshold"] = _exact_field(-1 / C)["value"]
    if report.found() and report.certified:
        raise _Violation(payload)
    return payload


def cmd_schur(args):
    n = tuple(_list(args.n))
    if args.mode == "spec-q":
        if args.q is None:
            raise ValueError("--mode spec-q needs --q")
        q = io.parse_number(args.q)
        q = q if args.exact else float(q)
        return {"value": _exact_field(schur_principal_specialization(n, q))["value"]}
    u = _list(args.u) if args.u else None
    if u is None:
        raise ValueError(f"--mode {args.mode} needs --u")
    if not args.exact:
        u = [float(x) for x in u]
    if args.mode == "tableaux":
        res = schur_tableaux(u, n)
        return {"value": _exact_field(res.value)["value"], "count": res.count}
    return {"value": _exact_field(schur_bialternant(u, n))["value"]}


def cmd_monotone_scan(args):
    m, n = tuple(_list(args.m)), tuple(_list(args.n))
    report = monotonicity_certify(
        m,
        n,
        io.parse_number(args.rho),
        random_state=args.seed,
        chains=args.chains,
        steps=args.steps,
        boundary_reading=args.reading,
        tol=_tol(args),
    )
    payload = report.to_dict()
    if not report.passed:
        raise _Violation(payload)
    return payload


def cmd_strata(args):
    A = _matrix(args)
    if args.action == "rank":
        diag = rank_on_stratum(_spec(args), A.astype(float) if A.dtype == object else A, _tol(args))
        payload = diag.to_dict()
        if not diag.consistent:
            raise _Violation(payload)
        return payload
    return partition_of(A, _tol(args)).to_dict()


def cmd_rayleigh(args):
    spec = _spec(args)
    tol = _tol(args)
    if args.action == "probe":
        if not args.partition:
            raise ValueError("rayleigh probe needs --partition")
        pi = io.parse_partition(json.loads(args.partition) if args.partition.lstrip().startswith(("[", "{")) else _read_json(args.partition))
        rng = check_random_state(args.seed)
        B = distinct_row_core(rng, len(pi), float(spec.rho) * 0.9)
        E = rng.standard_normal((len(pi), len(pi)))
        E = (E + E.T) / 2
        E *= 0.02 * float(np.linalg.eigvalsh(B)[0]) / np.max(np.abs(np.linalg.eigvalsh(E)))
        report = continuity_probe(pi, spec, spec.M, inflated_path(B, E, pi), steps=args.steps, tol=tol)
        payload = report.to_dict()
        if not report.passed:
            raise _Violation(payload)
        return payload
    A = _matrix(args)
    res = equality_gap(A.astype(float) if A.dtype == object else A, spec, tol)
    cv = _exact_field(res["cV"])
    payload = {"cR": res["cR"], "cV": cv["value"], "cV_decimal": cv["decimal"], "gap": res["gap"]}
    if res["gap"] < -1e-9 * max(1.0, cv["decimal"]):
        raise _Violation(payload)
    return payload


def _read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def cmd_fuzz(args):
    suites = [s.strip() for s in args.suite.split(",")] if args.suite else ["all"]
    summary = run_fuzz(args.seed if args.seed is not None else 0, args.budget, suites, inject_violation=args.inject_violation, workers=args.workers)
    if not summary["all_passed"]:
        raise _Violation(summary)
    return summary


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--tol-psd", type=float, default=None, dest="tol_psd")
    common.add_argument("--tol-rank", type=float, default=None, dest="tol_rank")

    spec_args = argparse.ArgumentParser(add_help=False)
    spec_args.add_argument("--spec", help="spec JSON file")
    spec_args.add_argument("--c", help="comma-separated coefficients")
    spec_args.add_argument("--n", help="comma-separated exponents")
    spec_args.add_argument("--M")
    spec_args.add_argument("--cprime")
    spec_args.add_argument("--rho", default="1")
    spec_args.add_argument("--testset", default="FullClosedRealPowers")

    matrix_args = argparse.ArgumentParser(add_help=False)
    matrix_args.add_argument("--matrix", help="matrix JSON or CSV file")

    parser = argparse.ArgumentParser(prog="entrypos", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("threshold", parents=[common, spec_args], help="sharp constant C and -1/C")
    p.set_defaults(func=cmd_threshold)
    p = sub.add_parser("certify", parents=[common, spec_args, matrix_args], help="five-flag equivalence report")
    p.set_defaults(func=cmd_certify)
    p = sub.add_parser("dominate", parents=[common, matrix_args], help="rank-one dominating vector")
    p.add_argument("--method", choices=("auto", "perron", "generic"), default="auto")
    p.set_defaults(func=cmd_dominate)
    p = sub.add_parser("sharpness", parents=[common, spec_args], help="search for a rank-one witness")
    p.add_argument("--grid", type=int, default=64)
    p.set_defaults(func=cmd_sharpness)
    p = sub.add_parser("schur", parents=[common], help="evaluate a Schur polynomial")
    p.add_argument("--n", required=True)
    p.add_argument("--u")
    p.add_argument("--q")
    p.add_argument("--mode", choices=("bialternant", "tableaux", "spec-q"), default="bialternant")
    p.add_argument("--exact", action="store_true")
    p.set_defaults(func=cmd_schur)
    p = sub.add_parser("monotone-scan", parents=[common], help="sample the Schur ratio along chains")
    p.add_argument("--m", required=True)
    p.add_argument("--n", required=True)
    p.add_argument("--rho", default="1")
    p.add_argument("--chains", type=int, default=100)
    p.add_argument("--steps", type=int, default=6)
    p.add_argument("--reading", choices=("intended", "literal"), default="intended")
    p.set_defaults(func=cmd_monotone_scan)
    p = sub.add_parser("strata", parents=[common, spec_args, matrix_args], help="partition of a matrix, or ranks")
    p.add_argument("action", nargs="?", choices=("rank",))
    p.set_defaults(func=cmd_strata)
    p = sub.add_parser("rayleigh", parents=[common, spec_args, matrix_args], help="Rayleigh constant, or a continuity probe")
    p.add_argument("action", nargs="?", choices=("probe",))
    p.add_argument("--partition", help="JSON list of 1-based blocks, inline or as a file")
    p.add_argument("--steps", type=int, default=16)
    p.set_defaults(func=cmd_rayleigh)
    p = sub.add_parser("fuzz", parents=[common], help="randomized invariant suites")
    p.add_argument("--budget", type=int, default=10)
    p.add_argument("--suite", help=f"comma list from {sorted(SUITES)} or 'all'")
    p.add_argument("--inject-violation", action="store_true", dest="inject_violation")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_fuzz)
    return parser


def run(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    fmt = args.format
    try:
        payload = args.func(args)
    except _Violation as v:
        _emit(v.payload, fmt, out)
        return EXIT_VIOLATION
    except (ValueError, TypeError, KeyError, OSError, ZeroDivisionError, DomainError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT
    _emit(payload, fmt, out)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
