"""2D coordinates from a distance matrix: classical scaling seed plus
stress-majorization refinement."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DegenerateInput, ShapeMismatch
from .matrices import LabeledMatrix


@dataclass
class Embedding:
    labels: list
    coords: np.ndarray  # N x m
    stress: float


def _dist_values(dist):
    if isinstance(dist, LabeledMatrix):
        dist.require_kind("distance")
        return dist.values
    return np.asarray(dist, dtype=float)


def classical_mds(dist: LabeledMatrix, m: int = 2) -> Embedding:
    """Torgerson scaling: double-center the squared distances and keep the
    top-m non-negative eigenpairs."""
    D = _dist_values(dist)
    n = D.shape[0]
    if n < 2:
        raise ShapeMismatch("need at least 2 points")
    if np.all(D == 0):
        raise DegenerateInput("all distances are zero")
    J = np.eye(n) - np.ones((n, n)) / n
    B = -0.5 * J @ (D ** 2) @ J
    evals, evecs = np.linalg.eigh(B)
    order = np.argsort(evals)[::-1][:m]
    lam = np.maximum(evals[order], 0.0)
    coords = evecs[:, order] * np.sqrt(lam)
    if coords.shape[1] < m:
        coords = np.hstack([coords, np.zeros((n, m - coords.shape[1]))])
    labels = dist.labels if isinstance(dist, LabeledMatrix) else [str(i) for i in range(n)]
    return Embedding(list(labels), coords, stress(coords, D))


def embedded_distances(coords) -> np.ndarray:
    coords = np.asarray(coords, dtype=float)
    diff = coords[:, None, :] - coords[None, :, :]
    return np.sqrt((diff ** 2).sum(axis=-1))


def stress(coords, dist) -> float:
    """Kruskal stress between target distances and embedded distances."""
    D = _dist_values(dist)
    coords = np.asarray(coords, dtype=float)
    if coords.shape[0] != D.shape[0]:
        raise ShapeMismatch(f"{coords.shape[0]} points vs {D.shape[0]} distances")
    Dhat = embedded_distances(coords)
    iu = np.triu_indices(D.shape[0], k=1)
    num = ((D[iu] - Dhat[iu]) ** 2).sum()
    den = (D[iu] ** 2).sum()
    if den == 0:
        raise DegenerateInput("all distances are zero")
    return float(np.sqrt(num / den))


def refine(embedding: Embedding, dist, max_iters: int = 500, tol: float = 1e-9) -> Embedding:
    """Iterative majorization (Guttman transform); stress never increases.

    Stops at relative improvement below tol or at max_iters, returning the
    best configuration seen.
    """
    D = _dist_values(dist)
    n = D.shape[0]
    X = np.array(embedding.coords, dtype=float)
    best_X = X.copy()
    best_s = stress(X, D)
    s_prev = best_s
    for _ in range(max_iters):
        Dhat = embedded_distances(X)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(Dhat > 0, D / np.where(Dhat > 0, Dhat, 1.0), 0.0)
        B = -ratio
        np.fill_diagonal(B, 0.0)
        np.fill_diagonal(B, -B.sum(axis=1))
        X = (B @ X) / n
        s = stress(X, D)
        if s < best_s:
            best_s = s
            best_X = X.copy()
        if s_prev > 0 and (s_prev - s) / s_prev < tol:
            break
        s_prev = s
    return Embedding(list(embedding.labels), best_X, best_s)


def save_embedding_csv(embedding: Embedding, path, node_meta=None):
    """`label,x,y[,z]` plus any node metadata columns."""
    path = Path(path)
    m = embedding.coords.shape[1]
    axis_names = ["x", "y", "z"][:m] + [f"dim{i}" for i in range(3, m)]
    meta_keys = ["country", "industry", "sub_industry"] if node_meta else []
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["label"] + axis_names + meta_keys)
        for lbl, row in zip(embedding.labels, embedding.coords):
            meta = (node_meta or {}).get(lbl, {})
            writer.writerow([lbl] + [repr(float(v)) for v in row] + [meta.get(k, "") for k in meta_keys])
