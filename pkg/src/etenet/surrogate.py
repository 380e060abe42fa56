"""Seeded shuffling surrogates: the randomized-TE bias baseline, Effective TE,
Normalized TE, and the correlation-distance noise floor."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .discretize import BinningSpec, symbolize_panel
from .errors import LabelMismatch, ShapeTooSmall
from .infotheory import _self_cond_entropy_raw, _spec_meta, te_matrix_from_symbols
from .matrices import LabeledMatrix

DEFAULT_RTE_SIMS = 25
DEFAULT_NOISE_SIMS = 1000


@dataclass(frozen=True)
class SurrogatePlan:
    """Deterministic seeding: every (simulation, column) pair owns a private
    stream derived from the master seed, so results are independent of
    execution order."""

    n_sims: int
    master_seed: int

    def __post_init__(self):
        if self.n_sims < 1:
            raise ValueError("n_sims must be >= 1")

    def seed_for(self, sim: int, column: int = 0) -> np.random.SeedSequence:
        return np.random.SeedSequence(self.master_seed, spawn_key=(sim, column))

    def rng(self, sim: int, column: int = 0) -> np.random.Generator:
        return np.random.default_rng(self.seed_for(sim, column))


def shuffle_series(x, seed) -> np.ndarray:
    """Uniform random permutation of x; the multiset of values is unchanged."""
    x = np.asarray(x)
    rng = np.random.default_rng(seed)
    return x[rng.permutation(len(x))]


def _shuffled_columns(values, plan: SurrogatePlan, sim: int) -> np.ndarray:
    T, N = values.shape
    out = np.empty_like(values)
    for j in range(N):
        out[:, j] = values[plan.rng(sim, j).permutation(T), j]
    return out


def rte_matrix(panel, spec: BinningSpec, k: int = 1, l: int = 1,
               plan: SurrogatePlan | None = None) -> LabeledMatrix:
    """Element-wise mean TE over panels in which every column is independently
    shuffled; this is the finite-sample bias floor subtracted by ETE."""
    if plan is None:
        plan = SurrogatePlan(DEFAULT_RTE_SIMS, 0)
    sym = symbolize_panel(panel.values, spec) - 1
    sims = []
    for sim in range(plan.n_sims):
        shuffled = _shuffled_columns(sym, plan, sim)
        sims.append(te_matrix_from_symbols(shuffled, spec.n_bins, k=k, l=l))
    values = np.mean(sims, axis=0)
    meta = {
        "k": k,
        "l": l,
        "binning": _spec_meta(spec),
        "n_sims": plan.n_sims,
        "master_seed": plan.master_seed,
    }
    return LabeledMatrix(panel.labels, values, "rte", meta=meta)


def ete_matrix(te: LabeledMatrix, rte: LabeledMatrix) -> LabeledMatrix:
    """Effective TE = TE - RTE, element-wise; negative entries are kept."""
    te.require_kind("te")
    rte.require_kind("rte")
    te.require_labels(rte)
    meta = dict(rte.meta)
    return LabeledMatrix(te.labels, te.values - rte.values, "ete", meta=meta)


def nte_matrix(ete: LabeledMatrix, panel, spec: BinningSpec) -> LabeledMatrix:
    """Normalize each destination column by that column's self-conditional
    entropy H(X_future | X_past); a vanishing denominator maps to 0."""
    ete.require_kind("ete")
    if panel.labels != ete.labels:
        raise LabelMismatch("panel columns do not match the ETE matrix labels")
    sym = symbolize_panel(panel.values, spec)
    denom = np.array([
        _self_cond_entropy_raw(sym[:, j], spec.n_bins) for j in range(sym.shape[1])
    ])
    values = np.zeros_like(ete.values)
    ok = denom >= 1e-12
    values[:, ok] = ete.values[:, ok] / denom[ok]
    return LabeledMatrix(ete.labels, values, "nte", meta=dict(ete.meta))


def correlation_noise_floor(plan: SurrogatePlan, shape=None, panel=None,
                            generator: str = "gaussian") -> dict:
    """Minimum off-diagonal correlation distance expected from independent
    columns: column-wise permutations of a real panel, or iid Gaussians.

    Returns the mean and standard deviation of the per-simulation minimum
    distance, plus the raw samples.
    """
    if generator not in ("gaussian", "permute-real-panel"):
        raise ValueError(f"unknown generator {generator!r}")
    if generator == "permute-real-panel":
        if panel is None:
            raise ValueError("permute-real-panel requires a panel")
        values = np.asarray(panel.values, dtype=float)
        T, N = values.shape
    else:
        if shape is None:
            raise ValueError("gaussian generator requires a shape")
        T, N = shape
    if T < 30 or N < 2:
        raise ShapeTooSmall(f"need T >= 30 and N >= 2, got ({T}, {N})")
    samples = np.empty(plan.n_sims)
    mask = ~np.eye(N, dtype=bool)
    for sim in range(plan.n_sims):
        if generator == "gaussian":
            mat = plan.rng(sim).standard_normal((T, N))
        else:
            mat = _shuffled_columns(values, plan, sim)
        corr = np.clip(np.corrcoef(mat.T), -1.0, 1.0)
        dist = np.sqrt(2.0 * (1.0 - corr))
        samples[sim] = dist[mask].min()
    return {
        "min_distance_mean": float(samples.mean()),
        "min_distance_std": float(samples.std()),
        "samples": samples,
    }
