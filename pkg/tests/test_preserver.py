from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from entrypos import sampling
from entrypos.preserver import (
    DominationError,
    MatrixFamily,
    PreserverSpec,
    apply_entrywise,
    dominating_vector,
    equivalence_report,
    hadamard_power,
    jacobi_trudi_det,
    loewner_necessity_check,
    quadratic_threshold_comparison,
    sharp_lmi_check,
    sharpness_search,
    threshold_C,
    verify_domination,
)


def spec2(cprime=0, family="RankOneOpen"):
    return PreserverSpec((1, 1), (0, 1), 2, cprime=cprime, testset=family, rho=1)


def test_threshold_two_by_two_is_five():
    C = threshold_C(spec2())
    assert C == 5 and isinstance(C, Fraction)


def test_threshold_general_coefficients():
    spec = PreserverSpec((2, 3), (0, 1), 2)
    assert threshold_C(spec) == Fraction(1, 2) + Fraction(4, 3)


def test_threshold_single_term():
    spec = PreserverSpec((3,), (2,), 5, rho=2)
    assert threshold_C(spec) == Fraction(8, 3)


def test_threshold_real_exponents_is_float():
    spec = PreserverSpec((1, 1), (0, 1.5), 2.5, testset="RankOneOpen")
    C = threshold_C(spec)
    assert isinstance(C, float)
    # V(1.5, 2.5)/V(0, 1.5) = 1/1.5 and V(0, 2.5)/V(0, 1.5) = 2.5/1.5
    assert C == pytest.approx((1 / 1.5) ** 2 + (2.5 / 1.5) ** 2)


def test_quadratic_comparison_records_both_bounds():
    cmp = quadratic_threshold_comparison(1, 1)
    assert cmp["sharp_bound"] == Fraction(-1, 5)
    assert cmp["remark_bound"] == Fraction(-1, 6)
    assert cmp["loewner_bound"] == Fraction(-1, 2)


def test_spec_invariants():
    with pytest.raises(ValueError):
        PreserverSpec((1, -1), (0, 1), 2)
    with pytest.raises(ValueError):
        PreserverSpec((1, 1), (0, 1), 1)
    with pytest.raises(ValueError):
        PreserverSpec((1, 1), (0, 2), 3, testset="ComplexDiscConsecutive")
    with pytest.raises(ValueError):
        PreserverSpec((1, 1, 1), (0, 0.5, 3), 4, testset="FullClosedRealPowers")
    PreserverSpec((1, 1, 1), (0, 2.5, 3), 4, testset="FullClosedRealPowers")


def test_entrywise_examples():
    h = spec2()
    A = np.array([[0.0, 1.0], [1.0, 0.0]])
    np.testing.assert_array_equal(apply_entrywise(h, A, part="h"), [[1, 2], [2, 1]])
    np.testing.assert_array_equal(apply_entrywise(lambda x: x, A), A)
    ones = np.ones((3, 3))
    np.testing.assert_allclose(apply_entrywise(h, ones, part="h"), 2 * ones)


def test_hadamard_power_rules():
    u = np.array([0.5, 2.0])
    np.testing.assert_allclose(hadamard_power(np.outer(u, u), 2), np.outer(u**2, u**2))
    np.testing.assert_array_equal(hadamard_power(np.zeros((2, 2)), 0), np.ones((2, 2)))
    with pytest.raises(ValueError):
        hadamard_power(np.array([[-1.0]]), 0.5)
    with pytest.raises(ValueError):
        hadamard_power(np.array([[1j]]), 1.5)


def test_jacobi_trudi_one_by_one():
    lhs, rhs = jacobi_trudi_det([3], [Fraction(2)], [Fraction(1, 2)])
    assert lhs == rhs == 2 * Fraction(1, 2) ** 6


def test_jacobi_trudi_example_pair():
    lhs, rhs = jacobi_trudi_det([0, 1, 2], [1, 1, 1], [1, 2])
    # subsets (0,1), (0,2), (1,2): determinants 1, 3, 2
    assert lhs == rhs == 1 + 9 + 4


def test_jacobi_trudi_zero_coefficient_drops_out():
    a = jacobi_trudi_det([0, 1, 2], {0: 1, 1: 0, 2: 1}, [1, 2])
    assert a.lhs == a.rhs == 9
    with pytest.raises(ValueError):
        jacobi_trudi_det([0], [1], [1, 2])


def test_sharp_lmi_equality_cases():
    spec = PreserverSpec((1, 1), (1, 2), 3)
    assert sharp_lmi_check(spec, np.zeros((2, 2))).equality
    one = PreserverSpec((2,), (1,), 3, rho=1)
    assert sharp_lmi_check(one, [[1.0]]).equality


def test_sharp_lmi_strict_on_distinct_rank_one():
    u = np.array([0.3, 0.8])
    v = sharp_lmi_check(spec2(), np.outer(u, u))
    assert v.holds and v.strict and not v.equality


def test_test_set_membership_errors():
    with pytest.raises(ValueError):
        sharp_lmi_check(spec2(), np.eye(2))
    with pytest.raises(ValueError):
        sharp_lmi_check(spec2(family="FullClosedRealPowers"), np.array([[2.0, 0], [0, 1]]))


def test_equivalence_examples():
    spec = PreserverSpec((1, 1), (0, 1), 2, cprime=Fraction(-1, 10))
    rep = equivalence_report(spec, np.ones((2, 2)), random_state=0)
    assert rep.flags == (False,) * 5
    rep = equivalence_report(spec, np.diag([1.0, 0.5]) * 0.9, random_state=0)
    assert rep.flags == (True,) * 5
    u = np.array([0.2, 0.7])
    rep = equivalence_report(spec2(Fraction(-1, 10)), np.outer(u, u), random_state=0)
    assert rep.consistent and rep.has_dominating_vector


def test_equivalence_preconditions():
    with pytest.raises(ValueError):
        equivalence_report(PreserverSpec((1, 1), (0, 1), 2, cprime=Fraction(-1, 5)), np.eye(2) * 0.5)
    A = np.diag([0.5, 0.0])
    with pytest.raises(ValueError):
        equivalence_report(PreserverSpec((1, 1), (1, 2), 3), A)


def test_domination_diagonal():
    u = dominating_vector(np.diag([1.0, 4.0]), 0)
    assert u[0] != u[1] and np.all(u > 0)
    assert verify_domination(np.diag([1.0, 4.0]), u)


def test_domination_zero_row():
    A = np.zeros((3, 3))
    A[:2, :2] = [[2.0, 1.0], [1.0, 1.0]]
    u = dominating_vector(A, 3)
    assert u[2] == 0 and np.all(u[:2] > 0) and verify_domination(A, u)


def test_domination_rank_one_is_scaled_copy():
    v = np.array([0.2, 0.5, 0.9])
    u = dominating_vector(np.outer(v, v), 5)
    t = u / v
    assert np.allclose(t, t[0]) and 0 < t[0] <= 1 + 1e-12


def test_domination_rejects_equal_rows():
    with pytest.raises(ValueError):
        dominating_vector(np.ones((2, 2)))


def test_domination_complex():
    A = sampling.complex_psd(0, 4)
    u = dominating_vector(A, 1)
    assert np.iscomplexobj(u) and verify_domination(A, u)


def test_domination_retry_budget():
    # two equal rows inside an irreducible block leave no admissible perturbation
    A = np.array([[1.0, 1.0, 0.5], [1.0, 1.0, 0.5], [0.5, 0.5, 1.0]])
    with pytest.raises(DominationError):
        dominating_vector(A, 0, check_rows=False, max_retries=4)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), N=st.integers(2, 6), zero=st.booleans())
def test_domination_property(seed, N, zero):
    rng = np.random.default_rng(seed)
    A = sampling.reducible_nonneg_psd(rng, N, zero_row=zero)
    u = dominating_vector(A, rng)
    assert verify_domination(A, u)
    assert np.all(u >= 0)


def test_loewner_examples():
    assert loewner_necessity_check([1, 1, -0.5], 2).holds
    assert loewner_necessity_check([0, 0, 1], 2).holds
    assert not loewner_necessity_check([1, 1, -0.6], 2).holds


def test_loewner_condition_passes_but_sharp_threshold_fails():
    cprime = -0.3
    assert loewner_necessity_check([1, 1, cprime], 2).holds
    rep = sharpness_search(spec2(Fraction(-3, 10)))
    assert rep.found() and rep.certified


def test_sharpness_at_threshold_has_no_witness():
    rep = sharpness_search(spec2(Fraction(-1, 5)))
    assert not (rep.found() and rep.certified)


def test_sharpness_real_exponents_certified_in_high_precision():
    spec = PreserverSpec((1, 1), (0, 1.5), 2.5, testset="RankOneOpen")
    C = threshold_C(spec)
    rep = sharpness_search(spec.with_cprime(-1.05 / C))
    assert rep.found() and rep.certified
