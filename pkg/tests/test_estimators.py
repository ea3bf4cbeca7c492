import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from entrypos import sampling
from entrypos.estimators import EntrywiseTransform, RankOneDominator, RayleighBound, StratumCompressor
from entrypos.preserver import verify_domination
from entrypos.strata import Partition, inflate


def test_entrywise_transform():
    t = EntrywiseTransform(coeffs=(1, 1), exponents=(0, 1), M=2, part="h")
    out = t.fit_transform(np.array([[0.0, 1.0], [1.0, 0.0]]))
    np.testing.assert_array_equal(out, [[1, 2], [2, 1]])
    assert clone(t).get_params() == t.get_params()
    with pytest.raises(NotFittedError):
        EntrywiseTransform().transform(np.eye(2))
    with pytest.raises(ValueError):
        EntrywiseTransform(part="q").fit()


def test_stratum_compressor_round_trip():
    pi = Partition.from_blocks([[1, 3], [2]], one_based=True)
    A = inflate(np.array([[0.8, 0.1], [0.1, 0.4]]), pi)
    for weighted in (False, True):
        sc = StratumCompressor(weighted=weighted).fit(A)
        assert sc.partition_ == pi and sc.n_blocks_ == 2
        np.testing.assert_allclose(sc.inverse_transform(sc.transform(A)), A, atol=1e-15)


def test_dominator_and_rayleigh():
    A = sampling.reducible_nonneg_psd(3, 4, zero_row=True)
    dom = RankOneDominator(random_state=0).fit(A)
    assert verify_domination(A, dom.u_) and dom.residual_min_eig_ >= -1e-12
    rb = RayleighBound(coeffs=(1, 1), exponents=(0, 1), M=2).fit([[1.0]])
    assert rb.c_R_ == pytest.approx(0.5)
    assert "random_state" in clone(dom).get_params()
