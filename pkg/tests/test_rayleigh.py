import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from entrypos import sampling
from entrypos.preserver import PreserverSpec, threshold_C
from entrypos.rayleigh import (
    c_R,
    c_R_rank_one,
    continuity_probe,
    equality_gap,
    inflated_path,
    jump_witness,
    minimality_certify,
    rayleigh_quotient,
)
from entrypos.strata import Partition


def test_quotient_on_scalar_identity():
    # with the 0^0 = 1 convention Id^{o 0} is the all-ones matrix; N = 1 removes the ambiguity
    assert rayleigh_quotient([[1.0]], [2.0], (1, 2, 3), (0, 1, 2), 3) == pytest.approx(1 / 6)


def test_quotient_zero_denominator():
    with pytest.raises(ZeroDivisionError):
        rayleigh_quotient(np.diag([1.0, 0.0]), [0.0, 1.0], (1,), (1,), 2)


def test_c_R_identity_one_by_one_and_two_by_two():
    assert c_R([[1.0]], (1, 1), (0, 1), 2) == pytest.approx(0.5)
    # h[Id_2] = ones + Id has smallest eigenvalue 1
    assert c_R(np.eye(2), (1, 1), (0, 1), 2) == pytest.approx(1.0)


def test_c_R_of_zero_matrix():
    assert c_R(np.zeros((3, 3)), (1, 1, 1), (0, 1, 2), 3) == 0.0


def test_c_R_of_constant_matrix():
    assert c_R(0.5 * np.ones((2, 2)), (1, 1), (0, 1), 2) == pytest.approx(0.25 / 1.5)


def test_c_R_domain():
    with pytest.raises(ValueError):
        c_R(np.eye(2), (1, 1), (1, 2), 3)
    with pytest.raises(ValueError):
        c_R(np.diag([1.0, -1.0]), (1, 1), (0, 1), 2)


def test_rank_one_closed_form_two_by_two():
    x, y = 0.3, 0.7
    expected = (x + y) ** 2 + (x * y) ** 2
    assert c_R_rank_one([x, y], (1, 1), (0, 1), 2) == pytest.approx(expected)
    assert c_R(np.outer([x, y], [x, y]), (1, 1), (0, 1), 2) == pytest.approx(expected, rel=1e-8)


def test_rank_one_scalar_case():
    assert c_R_rank_one([0.5], (2,), (0,), 3) == pytest.approx(0.5**6 / 2)


def test_rank_one_approaches_threshold_at_corner():
    spec = PreserverSpec((1, 1), (0, 1), 2)
    vals = [c_R_rank_one([1 - 2 * e, 1 - e], spec) for e in (1e-2, 1e-3, 1e-4)]
    assert vals[0] < vals[1] < vals[2] < 5
    assert 5 - vals[2] < 2e-3


def test_rank_one_rejects_bad_vectors():
    with pytest.raises(ValueError):
        c_R_rank_one([0.5, 0.5], (1, 1), (0, 1), 2)
    with pytest.raises(ValueError):
        c_R_rank_one([0.0, 0.5], (1, 1), (0, 1), 2)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), N=st.integers(1, 4))
def test_quotient_bounded_by_c_R(seed, N):
    rng = np.random.default_rng(seed)
    A = sampling.gram_matrix(rng, N)
    coeffs, exps = tuple(rng.uniform(0.5, 2, size=N)), sampling.random_exponents(rng, N, top=4, zero_first=True)
    M = exps[-1] + 1
    bound = c_R(A, coeffs, exps, M)
    assert bound <= float(threshold_C(PreserverSpec(coeffs, exps, M))) + 1e-9
    for _ in range(5):
        u = rng.standard_normal(N)
        assert rayleigh_quotient(A, u, coeffs, exps, M) <= bound + 1e-9 * max(1, bound)


def test_minimality_examples():
    v = minimality_certify(np.outer([0.2, 0.9], [0.2, 0.9]), (1, 1), (0, 1), 2)
    assert v.attains and v.minimal and not v.degenerate
    v = minimality_certify(np.eye(2), (1, 1), (0, 1), 2)
    assert v.c_R == pytest.approx(1.0) and v.passed
    v = minimality_certify(np.zeros((2, 2)), (1, 1), (0, 1), 2)
    assert v.degenerate and v.passed


def test_continuity_constant_path():
    pi = Partition.whole(3)
    rep = continuity_probe(pi, (1, 1), 2, lambda t: 0.5 * np.ones((3, 3)), exponents=(0, 1))
    assert rep.passed and max(rep.oscillations) == 0


def test_continuity_inflated_path():
    pi = Partition.from_blocks([[1, 2], [3]], one_based=True)
    B = np.array([[0.7, 0.2], [0.2, 0.5]])
    E = np.array([[0.01, 0.0], [0.0, -0.01]])
    rep = continuity_probe(pi, (1, 1, 1), 3, inflated_path(B, E, pi), exponents=(0, 1, 2))
    assert rep.passed and all(1.3 < r < 3 for r in rep.ratios)


def test_continuity_aborts_when_leaving_stratum():
    pi = Partition.whole(2)
    path = lambda t: (1 - t) * np.ones((2, 2)) + t * np.eye(2)
    rep = continuity_probe(pi, (1, 1), 2, path, exponents=(0, 1))
    assert not rep.passed and rep.aborted_at is not None


def test_jump_witness_at_stratum_boundary():
    w = jump_witness((1, 1), 2, exponents=(0, 1))
    assert w["at_zero"] == pytest.approx(0.5)
    assert w["right_settled"] and w["jump"] > 1


def test_equality_gap():
    spec = PreserverSpec((1, 1), (0, 1), 2)
    res = equality_gap(np.zeros((2, 2)), spec)
    assert res["cR"] == 0 and res["gap"] == 5
    near = np.outer([0.999, 0.9995], [0.999, 0.9995])
    res = equality_gap(near, spec)
    assert 0 < res["gap"] < 0.02
    A = np.array([[0.9, 0.3], [0.3, 0.5]])
    assert equality_gap(A, spec)["gap"] > 1e-12
    with pytest.raises(ValueError):
        equality_gap(2 * np.eye(2), spec)
