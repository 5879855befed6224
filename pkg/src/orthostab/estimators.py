"""scikit-learn style facade over the Hyers engine."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import as_points
from .hyers import HyersLimit, SampledMap, decompose_T_Q, symmetric_probes


class HyersEstimator(TransformerMixin, BaseEstimator):
    """Recover the exact solution near an approximate one.

    ``fit`` runs the Hyers iteration of ``f`` on the rows of ``X`` and their
    negatives, splits the limit into odd and even parts and fits a linear map
    to the odd part and symmetric forms to the even part.

    ``transform`` evaluates the limit itself at new points. ``predict``
    evaluates the fitted parametric surrogate ``T(x) + Q(x)``.
    """

    def __init__(self, f=None, n_max=40, stop_tol=1e-12, scaling="additive"):
        self.f = f
        self.n_max = n_max
        self.stop_tol = stop_tol
        self.scaling = scaling

    def _limit(self):
        if self.f is None or not callable(self.f):
            raise ValueError("f must be an evaluable map")
        return HyersLimit(self.f, self.n_max, self.stop_tol, self.scaling)

    def fit(self, X, y=None):
        X = as_points(X, "X")
        probes = symmetric_probes(X)
        A = self._limit()
        values = A(probes)
        T, Q, diag = decompose_T_Q(SampledMap(probes, values, "Hyers limit"))
        self.n_features_in_ = X.shape[1]
        self.probes_ = probes
        self.limit_values_ = values
        self.odd_part_ = T.values
        self.even_part_ = Q.values
        self.coef_ = np.asarray(diag["linear_fit"]["matrix"])
        self.forms_ = np.asarray(diag["form_fit"]["forms"])
        self.fit_residuals_ = {
            "linear": diag["linear_fit"]["max_residual"],
            "forms": diag["form_fit"]["max_residual"],
        }
        self.min_stop_n_ = A.min_stop_n
        return self

    def transform(self, X):
        check_is_fitted(self, "coef_")
        X = as_points(X, "X", self.n_features_in_)
        return self._limit()(X)

    def predict(self, X):
        check_is_fitted(self, "coef_")
        X = as_points(X, "X", self.n_features_in_)
        return X @ self.coef_.T + np.einsum("ni,kij,nj->nk", X, self.forms_, X)
