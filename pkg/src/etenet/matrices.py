"""Labeled square matrices (correlation, distance, TE variants) and their
CSV/JSON serialization."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import KindMismatch, LabelMismatch

KINDS = ("correlation", "distance", "te", "rte", "ete", "nte", "binary")
DIRECTED_KINDS = ("te", "rte", "ete", "nte")


@dataclass
class LabeledMatrix:
    """Square N x N matrix keyed by column labels.

    For the directed kinds the orientation is values[source][destination]:
    values[Y][X] is the flow from Y into X.
    """

    labels: list
    values: np.ndarray
    kind: str
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.labels = list(self.labels)
        self.values = np.asarray(self.values, dtype=float)
        n = len(self.labels)
        if len(set(self.labels)) != n:
            raise LabelMismatch("labels must be unique")
        if self.values.shape != (n, n):
            raise ValueError(f"values shape {self.values.shape} != ({n}, {n})")
        if self.kind not in KINDS:
            raise KindMismatch(f"unknown matrix kind {self.kind!r}")
        if self.kind == "correlation":
            self._require_symmetric()
            if not np.allclose(np.diag(self.values), 1.0, atol=1e-9):
                raise ValueError("correlation matrix must have unit diagonal")
        if self.kind == "distance":
            self._require_symmetric()
            if not np.allclose(np.diag(self.values), 0.0, atol=1e-9):
                raise ValueError("distance matrix must have zero diagonal")
            if np.any(self.values < -1e-12):
                raise ValueError("distances must be non-negative")

    def _require_symmetric(self):
        if not np.allclose(self.values, self.values.T, atol=1e-9):
            raise ValueError(f"{self.kind} matrix must be symmetric")

    @property
    def n(self):
        return len(self.labels)

    def loc(self, source, dest):
        return self.values[self.labels.index(source), self.labels.index(dest)]

    def require_kind(self, *kinds):
        if self.kind not in kinds:
            raise KindMismatch(f"expected kind in {kinds}, got {self.kind!r}")

    def require_labels(self, other):
        if self.labels != other.labels:
            raise LabelMismatch("matrices carry different labels")


def save_matrix_csv(mat: LabeledMatrix, path, meta=None):
    """CSV with a label header row/column, plus a '<path>.meta.json' sidecar."""
    path = Path(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["label"] + mat.labels)
        for lbl, row in zip(mat.labels, mat.values):
            writer.writerow([lbl] + [repr(float(v)) for v in row])
    sidecar = {"kind": mat.kind}
    sidecar.update(mat.meta)
    if meta:
        sidecar.update(meta)
    with open(path.with_suffix(path.suffix + ".meta.json"), "w") as fh:
        json.dump(sidecar, fh, indent=2)


def load_matrix_csv(path, kind=None) -> LabeledMatrix:
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        labels = header[1:]
        rows = [[float(v) for v in row[1:]] for row in reader]
    meta = {}
    meta_path = path.with_suffix(path.suffix + ".meta.json")
    if meta_path.exists():
        with open(meta_path) as fh:
            meta = json.load(fh)
    if kind is None:
        kind = meta.get("kind")
    if kind is None:
        raise KindMismatch(f"{path}: matrix kind not given and no sidecar found")
    meta.pop("kind", None)
    return LabeledMatrix(labels, np.array(rows), kind, meta=meta)
