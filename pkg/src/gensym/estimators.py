"""Thin scikit-learn wrappers: rows of ``X`` are sample points in the chart."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .curvature import curvature_at, tensor_norm_sq
from .hodge import curvature_operator, orthonormalize, selfdual_basis
from .models import DEFAULT_TOL, LABELS, analyze_point, classify_points, get_model


def _resolve(model, params, metric):
    if metric is not None:
        return metric, None
    entry = get_model(model)
    return entry.metric(params), entry


class CurvatureInvariants(BaseEstimator, TransformerMixin):
    """Pointwise scalar invariants of a catalog model or an explicit metric.

    Columns: tau, |rho|^2, |W|^2, |R|^2 and, for neutral or definite metrics,
    the sorted real parts of the W+ and W- eigenvalues (NaN otherwise).
    """

    feature_names = ("tau", "ricci_sq", "weyl_sq", "riemann_sq",
                     "wplus_0", "wplus_1", "wplus_2", "wminus_0", "wminus_1", "wminus_2")

    def __init__(self, model="type1", params=None, metric=None, seed=0):
        self.model = model
        self.params = params
        self.metric = metric
        self.seed = seed

    def fit(self, X, y=None):
        check_array(X)
        self.metric_, self.entry_ = _resolve(self.model, self.params, self.metric)
        self.n_features_in_ = 4
        return self

    def transform(self, X):
        check_is_fitted(self, "metric_")
        X = check_array(X)
        if X.shape[1] != 4:
            raise ValueError(f"expected 4 coordinates per row, got {X.shape[1]}")
        o = self.entry_.orientation(self.entry_.params(self.params)) if self.entry_ else 1
        out = np.full((X.shape[0], len(self.feature_names)), np.nan)
        for k, p in enumerate(X):
            mj, _, cv = curvature_at(self.metric_, p)
            out[k, :4] = (cv.tau, tensor_norm_sq(cv.ricci, mj.ginv), tensor_norm_sq(cv.weyl, mj.ginv),
                          tensor_norm_sq(cv.R, mj.ginv))
            if mj.signature[1] in (0, 2, 4):
                lf = selfdual_basis(orthonormalize(mj, self.seed).oriented(o), mj.g)
                _, w = curvature_operator(cv, mj, lf)
                out[k, 4:7] = np.sort(np.linalg.eigvals(w.Wplus).real)
                out[k, 7:] = np.sort(np.linalg.eigvals(w.Wminus).real)
        return out

    def get_feature_names_out(self, input_features=None):
        return np.array(self.feature_names, dtype=object)


class GeometryClassifier(BaseEstimator, ClassifierMixin):
    """Classification label from the curvature evidence at each point separately."""

    def __init__(self, model="type1", params=None, metric=None, zero_tol=DEFAULT_TOL["zero"],
                 witness=DEFAULT_TOL["witness"], seed=0, use_structures=True):
        self.model = model
        self.params = params
        self.metric = metric
        self.zero_tol = zero_tol
        self.witness = witness
        self.seed = seed
        self.use_structures = use_structures

    def fit(self, X, y=None):
        check_array(X)
        self.metric_, self.entry_ = _resolve(self.model, self.params, self.metric)
        self.classes_ = np.array(LABELS)
        self.n_features_in_ = 4
        return self

    def _tol(self):
        return {**DEFAULT_TOL, "zero": self.zero_tol, "witness": self.witness}

    def evidence(self, X) -> list:
        check_is_fitted(self, "metric_")
        X = check_array(X)
        kw = {}
        if self.entry_ is not None:
            prm = self.entry_.params(self.params)
            if self.use_structures and self.entry_.omegas:
                kw["omegas"] = self.entry_.omegas(prm)
        return [analyze_point(self.metric_, p, seed=self.seed, tol=self._tol(), **kw) for p in X]

    def predict(self, X):
        return np.array([classify_points([d], self._tol()).label for d in self.evidence(X)])
