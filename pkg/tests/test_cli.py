import io as _io
import json
from fractions import Fraction

import numpy as np
import pytest

from entrypos import io
from entrypos.cli import run
from entrypos.preserver import PreserverSpec


def call(*argv):
    out, err = _io.StringIO(), _io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def ones3(tmp_path):
    path = tmp_path / "ones3.json"
    path.write_text(json.dumps({"n": 3, "field": "real", "rows": [[1, 1, 1]] * 3}))
    return str(path)


def test_threshold_example():
    code, out, _ = call("threshold", "--c", "1,1", "--n", "0,1", "--M", "2", "--rho", "1")
    payload = json.loads(out)
    assert code == 0
    assert payload["C"] == "5" and payload["neg_inv"] == "-1/5"
    assert payload["neg_inv_decimal"] == -0.2


def test_threshold_from_spec_file(tmp_path):
    path = tmp_path / "spec.json"
    path.write_text(json.dumps({"c": [1, 1, 1], "n": [0, 1, 2], "M": 4, "rho": 1, "testset": "RankOneOpen"}))
    code, out, _ = call("threshold", "--spec", str(path))
    assert code == 0 and json.loads(out)["C"] == "109"


def test_schur_example():
    code, out, _ = call("schur", "--n", "0,1,3", "--u", "1,2,3", "--mode", "tableaux", "--exact")
    assert code == 0 and json.loads(out) == {"value": "6", "count": 3}


def test_schur_specialization():
    code, out, _ = call("schur", "--n", "0,1,3", "--mode", "spec-q", "--q", "2", "--exact")
    assert json.loads(out) == {"value": "7"}


def test_strata_example(ones3):
    code, out, _ = call("strata", "--matrix", ones3)
    assert code == 0 and json.loads(out) == {"blocks": [[1, 2, 3]], "size": 1}


def test_strata_rank(ones3, tmp_path):
    half = tmp_path / "half.csv"
    half.write_text("0.5,0.5,0\n0.5,0.5,0\n0,0,0.25\n")
    code, out, _ = call("strata", "rank", "--c", "1,1,1", "--n", "0,1,2", "--M", "3", "--matrix", str(half))
    payload = json.loads(out)
    assert code == 0 and payload["predictedRank"] == 2 and payload["consistent"]


def test_certify_and_dominate(tmp_path):
    path = tmp_path / "d.json"
    path.write_text(json.dumps({"n": 2, "field": "real", "rows": [[0.9, 0], [0, 0.4]]}))
    code, out, _ = call("certify", "--c", "1,1", "--n", "0,1", "--M", "2", "--cprime=-1/10", "--matrix", str(path), "--seed", "1")
    assert code == 0 and json.loads(out)["consistent"]
    code, out, _ = call("dominate", "--matrix", str(path), "--seed", "0")
    payload = json.loads(out)
    assert code == 0 and payload["verified"] and payload["residual_min_eig"] >= -1e-12


def test_sharpness_exit_code():
    base = ["sharpness", "--c", "1,1", "--n", "0,1", "--M", "2", "--testset", "RankOneOpen"]
    code, out, _ = call(*base, "--cprime=-1/5")
    assert code == 0
    code, out, _ = call(*base, "--cprime=-21/100")
    assert code == 3 and json.loads(out)["certified"]


def test_rayleigh_and_probe(ones3):
    code, out, _ = call("rayleigh", "--c", "1,1,1", "--n", "0,1,2", "--M", "3", "--matrix", ones3)
    payload = json.loads(out)
    assert code == 0 and payload["cV"] == "19" and payload["cR"] == pytest.approx(1 / 3)
    code, out, _ = call("rayleigh", "probe", "--c", "1,1,1", "--n", "0,1,2", "--M", "3", "--partition", "[[1,2],[3]]", "--seed", "4")
    assert code == 0 and json.loads(out)["passed"]


def test_monotone_scan():
    code, out, _ = call("monotone-scan", "--m", "0,1", "--n", "0,2", "--chains", "10", "--seed", "2")
    assert code == 0 and json.loads(out)["passed"]


def test_fuzz_examples():
    code, out, _ = call("fuzz", "--seed", "0", "--budget", "10", "--suite", "all")
    assert code == 0 and json.loads(out)["all_passed"]
    code, out, _ = call("fuzz", "--seed", "0", "--budget", "2", "--suite", "sharpness", "--inject-violation")
    payload = json.loads(out)
    assert code == 3 and payload["suites"]["sharpness"]["first_counterexample"]["certified"]
    code, _, err = call("fuzz", "--budget", "0")
    assert code == 2 and "budget" in err


def test_output_is_deterministic():
    argv = ["fuzz", "--seed", "11", "--budget", "3", "--suite", "domination,rayleigh-agreement"]
    assert call(*argv)[1] == call(*argv)[1]


def test_validation_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = call("strata", "--matrix", str(bad))
    assert code == 2 and "malformed" in err
    assert call("nonsense")[0] == 2
    assert call("threshold", "--c", "1,-1", "--n", "0,1", "--M", "2")[0] == 2


def test_csv_output(ones3):
    code, out, _ = call("strata", "--matrix", ones3, "--format", "csv")
    assert code == 0 and out.splitlines()[0] == "key,value" and "size,1" in out


def test_tolerance_flags(tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"n": 2, "field": "real", "rows": [[1, 0], [0, 1e-7]]}))
    spec = ["strata", "rank", "--c", "1,1", "--n", "1,2", "--M", "3", "--matrix", str(path)]
    loose = json.loads(call(*spec, "--tol-rank", "1e-4")[1])
    assert loose["rankH"] == 1


def test_matrix_json_round_trip(tmp_path):
    for A in (
        np.array([[1.5, -2.0], [-2.0, 3.25]]),
        np.array([[2, 1j], [-1j, 2]]),
        np.array([[Fraction(1, 3), 1], [1, Fraction(-2, 7)]], dtype=object),
    ):
        path = tmp_path / "m.json"
        io.dump_matrix(A, path)
        B = io.load_matrix(path)
        assert B.dtype == A.dtype or (A.dtype != object and np.iscomplexobj(A) == np.iscomplexobj(B))
        assert (B == A).all()


def test_matrix_csv_round_trip(tmp_path):
    A = np.array([[0.1, 2.0 / 3.0], [2.0 / 3.0, 1e-17]])
    path = tmp_path / "m.csv"
    io.dump_matrix(A, path)
    assert (io.load_matrix(path) == A).all()


def test_matrix_schema_errors():
    with pytest.raises(ValueError):
        io.parse_matrix({"n": 2, "rows": [[1, 2]]})
    with pytest.raises(ValueError):
        io.parse_matrix({"rows": [[[1, 1]]], "field": "real"})
    with pytest.raises(ValueError):
        io.parse_matrix({"rows": [[1]], "field": "quaternion"})


def test_spec_json_round_trip():
    spec = PreserverSpec((Fraction(1, 2), 2), (0, 1.5), 2.5, Fraction(-1, 9), "RankOneOpen", 1)
    assert io.parse_spec(json.loads(json.dumps(io.spec_to_json(spec)))) == spec
