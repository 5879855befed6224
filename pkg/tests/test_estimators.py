import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from orthostab import HyersEstimator
from orthostab.models import MapModel, NoiseSpec
from orthostab.orthogonality import PairSampler

L = np.array([[2.0, -1.0], [0.5, 3.0]])


def test_params_roundtrip():
    est = HyersEstimator(n_max=25, scaling="quadratic")
    assert est.get_params() == {"f": None, "n_max": 25, "stop_tol": 1e-12, "scaling": "quadratic"}
    assert clone(est).get_params()["n_max"] == 25


def test_fit_recovers_linear_part():
    f = MapModel.from_linear(L, noise=NoiseSpec(0.5, 2, "odd"), parity="odd")
    X = PairSampler(0, 2).vectors(100)
    est = HyersEstimator(f, n_max=30).fit(X)
    assert est.n_features_in_ == 2
    assert est.probes_.shape == (200, 2)
    assert np.max(np.abs(est.coef_ - L)) <= 1e-7
    assert np.max(np.abs(est.even_part_)) == 0.0
    assert np.max(np.abs(est.forms_)) <= 1e-7
    Z = PairSampler(1, 2).vectors(20)
    assert np.max(np.abs(est.transform(Z) - Z @ L.T)) <= 0.5 * 2.0**-29
    assert np.allclose(est.predict(Z), Z @ L.T, atol=1e-6)
    assert np.array_equal(est.fit_transform(X), est.limit_values_[:100])


def test_quadratic_scaling_recovers_form():
    B = np.array([[1.0, 0.5], [0.5, 2.0]])
    f = MapModel.from_forms(B, noise=NoiseSpec(0.2, 3, "even"), parity="even")
    est = HyersEstimator(f, n_max=30, scaling="quadratic").fit(PairSampler(2, 2).vectors(50))
    assert np.allclose(est.forms_[0], B, atol=1e-7)


def test_not_fitted_and_bad_input():
    est = HyersEstimator(MapModel.from_linear(L))
    with pytest.raises(NotFittedError):
        est.transform(np.ones((1, 2)))
    with pytest.raises(ValueError):
        HyersEstimator().fit(np.ones((3, 2)))
    est.fit(np.ones((3, 2)))
    with pytest.raises(ValueError):
        est.predict(np.ones((3, 3)))
