"""Correlation and distance matrices, thresholded asset graphs, and the
undirected + directed centrality suite."""

from __future__ import annotations

import csv
import json
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import EmptyGraph, KindMismatch, NonConvergence, ZeroVariance
from .matrices import DIRECTED_KINDS, LabeledMatrix

KEEP_BELOW = "keep-below"
KEEP_ABOVE = "keep-above"

UNDIRECTED_MEASURES = ("ND", "EC", "CC", "HC", "BC")
DIRECTED_MEASURES = ("ND_in", "ND_out", "EC_in", "EC_out", "HC_in", "HC_out", "BC_dir")
STRENGTH_MEASURES = ("NS", "NS_in", "NS_out")

POWER_MAX_ITERS = 100_000
POWER_TOL = 1e-10


def pearson_matrix(panel) -> LabeledMatrix:
    """Pearson correlations between all panel columns."""
    values = panel.values
    std = values.std(axis=0)
    for j, s in enumerate(std):
        if s == 0:
            raise ZeroVariance(panel.labels[j])
    corr = np.corrcoef(values.T)
    corr = np.clip((corr + corr.T) / 2.0, -1.0, 1.0)
    np.fill_diagonal(corr, 1.0)
    return LabeledMatrix(panel.labels, corr, "correlation")


def correlation_distance(corr: LabeledMatrix) -> LabeledMatrix:
    """d = sqrt(2 (1 - c)): 0 for perfect correlation, 2 for anticorrelation."""
    corr.require_kind("correlation")
    d = np.sqrt(np.maximum(2.0 * (1.0 - corr.values), 0.0))
    np.fill_diagonal(d, 0.0)
    return LabeledMatrix(corr.labels, d, "distance")


def nte_distance(nte: LabeledMatrix) -> LabeledMatrix:
    """Distance from normalized flows: apply the correlation-distance map to
    the NTE values, zero the diagonal, and keep the smaller of the two
    directed distances for each pair."""
    nte.require_kind("nte")
    d = np.sqrt(np.maximum(2.0 * (1.0 - np.minimum(nte.values, 1.0)), 0.0))
    np.fill_diagonal(d, 0.0)
    d = np.minimum(d, d.T)
    return LabeledMatrix(nte.labels, d, "distance")


@dataclass
class AssetGraph:
    """Thresholded graph; nodes without edges are excluded, no self-loops."""

    nodes: list            # labels, in matrix order
    edges: list            # (u, v, weight); undirected edges stored once
    directed: bool
    threshold: float
    mode: str
    node_meta: dict = field(default_factory=dict)

    @property
    def n(self):
        return len(self.nodes)

    def __post_init__(self):
        for u, v, _ in self.edges:
            if u == v:
                raise ValueError("self-loops are not allowed")


def asset_graph(matrix: LabeledMatrix, threshold: float, mode: str | None = None,
                node_meta: dict | None = None) -> AssetGraph:
    """Keep exactly the pairs passing a strict threshold comparison.

    Distance matrices keep pairs strictly below the threshold; TE-family score
    matrices keep pairs strictly above it and yield a directed graph.
    """
    if not np.isfinite(threshold):
        raise ValueError("threshold must be finite")
    if matrix.kind == "distance":
        expected = KEEP_BELOW
        directed = False
    elif matrix.kind in DIRECTED_KINDS:
        expected = KEEP_ABOVE
        directed = True
    else:
        raise KindMismatch(f"cannot threshold a {matrix.kind!r} matrix")
    if mode is not None and mode != expected:
        raise KindMismatch(f"{matrix.kind!r} matrices use {expected}")
    vals = matrix.values
    n = matrix.n
    edges = []
    if directed:
        for i in range(n):
            for j in range(n):
                if i != j and vals[i, j] > threshold:
                    edges.append((matrix.labels[i], matrix.labels[j], float(vals[i, j])))
    else:
        for i in range(n):
            for j in range(i + 1, n):
                if vals[i, j] < threshold:
                    edges.append((matrix.labels[i], matrix.labels[j], float(vals[i, j])))
    connected = {u for u, _, _ in edges} | {v for _, v, _ in edges}
    nodes = [lbl for lbl in matrix.labels if lbl in connected]
    meta = {lbl: (node_meta or {}).get(lbl, {}) for lbl in nodes}
    return AssetGraph(nodes, edges, directed, threshold, expected, meta)


def binarize(matrix: LabeledMatrix, threshold: float) -> LabeledMatrix:
    """Entrywise indicator (value > threshold) with a zero diagonal."""
    out = (matrix.values > threshold).astype(float)
    np.fill_diagonal(out, 0.0)
    return LabeledMatrix(matrix.labels, out, "binary")


# ---------------------------------------------------------------------------
# Centralities
# ---------------------------------------------------------------------------

@dataclass
class CentralityReport:
    nodes: list
    values: dict  # measure -> np.ndarray aligned with nodes

    def top(self, measure, k=5):
        """Top-k (label, value) rows, descending; ties at rank k included."""
        vals = self.values[measure]
        order = sorted(range(len(self.nodes)), key=lambda i: (-vals[i], self.nodes[i]))
        if not order:
            return []
        if len(order) <= k:
            cut = len(order)
        else:
            kth = vals[order[k - 1]]
            cut = k
            while cut < len(order) and vals[order[cut]] == kth:
                cut += 1
        return [(self.nodes[i], float(vals[i])) for i in order[:cut]]


def _adjacency(graph: AssetGraph):
    index = {lbl: i for i, lbl in enumerate(graph.nodes)}
    succ = [[] for _ in graph.nodes]
    pred = [[] for _ in graph.nodes]
    for u, v, _ in graph.edges:
        iu, iv = index[u], index[v]
        succ[iu].append(iv)
        pred[iv].append(iu)
        if not graph.directed:
            succ[iv].append(iu)
            pred[iu].append(iv)
    return succ, pred


def _bfs_hops(succ, source):
    n = len(succ)
    dist = np.full(n, -1, dtype=np.int64)
    dist[source] = 0
    q = deque([source])
    while q:
        u = q.popleft()
        for v in succ[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                q.append(v)
    return dist


def _brandes(succ):
    """Unweighted betweenness; each ordered source-target pair contributes."""
    n = len(succ)
    bc = np.zeros(n)
    for s in range(n):
        stack = []
        preds = [[] for _ in range(n)]
        sigma = np.zeros(n)
        sigma[s] = 1.0
        dist = np.full(n, -1, dtype=np.int64)
        dist[s] = 0
        q = deque([s])
        while q:
            v = q.popleft()
            stack.append(v)
            for w in succ[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    q.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = np.zeros(n)
        while stack:
            w = stack.pop()
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                bc[w] += delta[w]
    return bc


def _components(succ, pred):
    """Weakly connected components as lists of node indices."""
    n = len(succ)
    seen = [False] * n
    comps = []
    for s in range(n):
        if seen[s]:
            continue
        comp = []
        q = deque([s])
        seen[s] = True
        while q:
            u = q.popleft()
            comp.append(u)
            for v in succ[u] + pred[u]:
                if not seen[v]:
                    seen[v] = True
                    q.append(v)
        comps.append(comp)
    return comps


def _has_cycle(succ, comp):
    indeg = {u: 0 for u in comp}
    members = set(comp)
    for u in comp:
        for v in succ[u]:
            if v in members:
                indeg[v] += 1
    q = deque([u for u in comp if indeg[u] == 0])
    removed = 0
    while q:
        u = q.popleft()
        removed += 1
        for v in succ[u]:
            if v in members:
                indeg[v] -= 1
                if indeg[v] == 0:
                    q.append(v)
    return removed < len(comp)


def _power_iteration(A):
    """Perron vector of a non-negative matrix via shifted power iteration."""
    n = A.shape[0]
    x = np.full(n, 1.0 / np.sqrt(n))
    shifted = A + np.eye(n)
    for _ in range(POWER_MAX_ITERS):
        y = shifted @ x
        norm = np.linalg.norm(y)
        if norm == 0:
            return np.zeros(n)
        y /= norm
        if np.linalg.norm(y - x) < POWER_TOL:
            return y
        x = y
    raise NonConvergence("eigenvector power iteration did not converge")


def _eigenvector_centrality(graph: AssetGraph, succ, pred, incoming: bool):
    """EC per weakly connected component, each scaled to unit max; DAG-like
    directed components (zero spectral radius) score 0."""
    n = graph.n
    out = np.zeros(n)
    comps = _components(succ, pred)
    neigh = pred if incoming else succ
    for comp in comps:
        if len(comp) == 1:
            continue
        if graph.directed and not _has_cycle(succ, comp):
            continue
        idx = {u: i for i, u in enumerate(comp)}
        A = np.zeros((len(comp), len(comp)))
        for u in comp:
            for v in neigh[u]:
                if v in idx:
                    A[idx[u], idx[v]] += 1.0
        vec = np.abs(_power_iteration(A))
        if vec.max() > 0:
            vec = vec / vec.max()
        for u in comp:
            out[u] = vec[idx[u]]
    return out


def centralities(graph: AssetGraph | None = None, matrix: LabeledMatrix | None = None,
                 measures=None) -> CentralityReport:
    """Compute the requested centrality measures.

    Graph measures (degree, eigenvector, closeness, betweenness) need a graph;
    node-strength measures operate on the full matrix and ignore thresholds.
    Hop counts (unweighted edges) are used for all path-based measures.
    """
    if measures is None:
        measures = []
        if graph is not None:
            measures += list(DIRECTED_MEASURES if graph.directed else UNDIRECTED_MEASURES)
        if matrix is not None:
            measures += ["NS_in", "NS_out"] if matrix.kind in DIRECTED_KINDS else ["NS"]
    graph_measures = [m for m in measures if m not in STRENGTH_MEASURES]
    strength_measures = [m for m in measures if m in STRENGTH_MEASURES]
    if graph_measures and graph is None:
        raise EmptyGraph("graph measures requested without a graph")
    if strength_measures and matrix is None:
        raise KindMismatch("node-strength measures need the full matrix")
    if graph is not None and not graph.nodes and graph_measures:
        raise EmptyGraph("graph has no connected nodes")

    values = {}
    nodes = None
    if graph is not None:
        nodes = list(graph.nodes)
        succ, pred = _adjacency(graph)
        n = graph.n
        hops_out = hops_in = None
        if any(m in graph_measures for m in ("CC", "HC", "HC_in", "HC_out")):
            hops_out = np.array([_bfs_hops(succ, s) for s in range(n)])
            hops_in = np.array([_bfs_hops(pred, s) for s in range(n)])
        for m in graph_measures:
            if m == "ND":
                values[m] = np.array([len(succ[u]) for u in range(n)], dtype=float)
            elif m == "ND_out":
                values[m] = np.array([len(succ[u]) for u in range(n)], dtype=float)
            elif m == "ND_in":
                values[m] = np.array([len(pred[u]) for u in range(n)], dtype=float)
            elif m == "EC":
                values[m] = _eigenvector_centrality(graph, succ, pred, incoming=False)
            elif m == "EC_out":
                values[m] = _eigenvector_centrality(graph, succ, pred, incoming=False)
            elif m == "EC_in":
                values[m] = _eigenvector_centrality(graph, succ, pred, incoming=True)
            elif m == "CC":
                cc = np.empty(n)
                for u in range(n):
                    d = hops_out[u]
                    reach = d[(d > 0)]
                    cc[u] = reach.mean() if reach.size else np.inf
                values[m] = cc
            elif m in ("HC", "HC_out"):
                values[m] = np.array([
                    (1.0 / hops_out[u][hops_out[u] > 0]).sum() for u in range(n)
                ])
            elif m == "HC_in":
                values[m] = np.array([
                    (1.0 / hops_in[u][hops_in[u] > 0]).sum() for u in range(n)
                ])
            elif m in ("BC", "BC_dir"):
                bc = _brandes(succ)
                if not graph.directed:
                    bc = bc / 2.0
                values[m] = bc
            else:
                raise ValueError(f"unknown measure {m!r}")
    if strength_measures:
        vals = matrix.values.copy()
        np.fill_diagonal(vals, 0.0)
        out_strength = vals.sum(axis=1)
        in_strength = vals.sum(axis=0)
        strengths = {
            "NS_out": out_strength,
            "NS_in": in_strength,
            "NS": in_strength + out_strength,
        }
        if nodes is None:
            nodes = list(matrix.labels)
            for m in strength_measures:
                values[m] = strengths[m]
        else:
            # restrict matrix rows/cols to the graph's nodes, matrix order
            pos = [matrix.labels.index(lbl) for lbl in nodes]
            for m in strength_measures:
                values[m] = strengths[m][pos]
    return CentralityReport(nodes or [], values)


# ---------------------------------------------------------------------------
# Exports
# ---------------------------------------------------------------------------

def graph_to_dot(graph: AssetGraph) -> str:
    kind = "digraph" if graph.directed else "graph"
    arrow = "->" if graph.directed else "--"
    lines = [f"{kind} assets {{"]
    for lbl in graph.nodes:
        meta = graph.node_meta.get(lbl, {})
        attrs = ", ".join(
            f'{k}="{meta[k]}"' for k in ("country", "industry", "lag") if k in meta
        )
        lines.append(f'  "{lbl}"' + (f" [{attrs}]" if attrs else "") + ";")
    for u, v, w in graph.edges:
        lines.append(f'  "{u}" {arrow} "{v}" [weight={w:.6g}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def save_graph_dot(graph: AssetGraph, path):
    Path(path).write_text(graph_to_dot(graph))


def save_graph_edge_csv(graph: AssetGraph, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["source", "target", "weight"])
        for u, v, w in graph.edges:
            writer.writerow([u, v, repr(w)])


def save_centrality_report(report: CentralityReport, path, fmt="csv"):
    path = Path(path)
    if fmt == "json":
        payload = {
            "nodes": report.nodes,
            "values": {m: [float(v) for v in arr] for m, arr in report.values.items()},
        }
        path.write_text(json.dumps(payload, indent=2))
        return
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        measures = sorted(report.values)
        writer.writerow(["label"] + measures)
        for i, lbl in enumerate(report.nodes):
            writer.writerow([lbl] + [repr(float(report.values[m][i])) for m in measures])
