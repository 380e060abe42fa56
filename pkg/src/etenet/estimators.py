"""Scikit-learn style front ends so the pipeline composes with the wider
ecosystem: a binning transformer, a network estimator, and a distance
embedder."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from . import surrogate
from .discretize import GLOBAL, PER_SERIES, fit_bins, symbolize
from .infotheory import te_matrix
from .matrices import LabeledMatrix
from .netmetrics import asset_graph, correlation_distance, nte_distance, pearson_matrix
from .embed import classical_mds, refine
from .panel import PanelColumn, ReturnPanel


def panel_from_array(X, labels=None) -> ReturnPanel:
    """Wrap a plain T x N return array as a ReturnPanel with synthetic dates."""
    X = np.asarray(X, dtype=float)
    T, N = X.shape
    if labels is None:
        labels = [f"c{j}" for j in range(N)]
    dates = tuple(f"t{t:06d}" for t in range(T))
    cols = [PanelColumn(lbl, {}, lag=len(lbl) - len(lbl.rstrip("*"))) for lbl in labels]
    return ReturnPanel(dates, cols, X)


class ReturnBinner(TransformerMixin, BaseEstimator):
    """Fixed-width discretizer: fit learns the bin range, transform emits
    integer symbols (1..n_bins per column)."""

    def __init__(self, width=0.1, mode=GLOBAL):
        self.width = width
        self.mode = mode

    def fit(self, X, y=None):
        X = check_array(X, ensure_2d=True)
        self.n_features_in_ = X.shape[1]
        if self.mode == PER_SERIES:
            self.specs_ = [fit_bins(X[:, j], self.width, PER_SERIES) for j in range(X.shape[1])]
        else:
            self.specs_ = [fit_bins(X, self.width, GLOBAL)] * X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "specs_")
        X = check_array(X, ensure_2d=True)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} columns, got {X.shape[1]}")
        out = np.empty(X.shape, dtype=np.int64)
        for j, spec in enumerate(self.specs_):
            out[:, j] = symbolize(X[:, j], spec).symbols
        return out


class TransferEntropyNetwork(BaseEstimator):
    """Fits the full matrix stack (correlation, distance, TE, RTE, ETE, NTE)
    from a T x N log-return array."""

    def __init__(self, bin_width=0.1, k=1, l=1, n_surrogates=25, random_state=0):
        self.bin_width = bin_width
        self.k = k
        self.l = l
        self.n_surrogates = n_surrogates
        self.random_state = random_state

    def fit(self, X, y=None, labels=None):
        X = check_array(X, ensure_2d=True)
        panel = panel_from_array(X, labels)
        spec = fit_bins(panel.values, self.bin_width, GLOBAL)
        plan = surrogate.SurrogatePlan(self.n_surrogates, self.random_state)
        self.labels_ = panel.labels
        self.binning_ = spec
        self.correlation_ = pearson_matrix(panel)
        self.distance_ = correlation_distance(self.correlation_)
        self.te_ = te_matrix(panel, spec, k=self.k, l=self.l)
        self.rte_ = surrogate.rte_matrix(panel, spec, k=self.k, l=self.l, plan=plan)
        self.ete_ = surrogate.ete_matrix(self.te_, self.rte_)
        self.nte_ = surrogate.nte_matrix(self.ete_, panel, spec)
        return self

    def flow_graph(self, threshold, matrix="ete"):
        check_is_fitted(self, "ete_")
        mat: LabeledMatrix = getattr(self, matrix + "_")
        return asset_graph(mat, threshold)


class StressEmbedding(TransformerMixin, BaseEstimator):
    """Classical scaling seed plus majorization refinement of a distance
    matrix into n_components coordinates."""

    def __init__(self, n_components=2, refine_iters=500, tol=1e-9):
        self.n_components = n_components
        self.refine_iters = refine_iters
        self.tol = tol

    def fit(self, D, y=None):
        self.fit_transform(D)
        return self

    def fit_transform(self, D, y=None):
        if isinstance(D, LabeledMatrix):
            emb = classical_mds(D, m=self.n_components)
        else:
            D = check_array(D, ensure_2d=True)
            emb = classical_mds(np.asarray(D, dtype=float), m=self.n_components)
        if self.refine_iters:
            emb = refine(emb, D, max_iters=self.refine_iters, tol=self.tol)
        self.embedding_ = emb
        self.stress_ = emb.stress
        return emb.coords

    def transform(self, D):
        check_is_fitted(self, "embedding_")
        return self.fit_transform(D)
