import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from etenet.errors import EmptyGraph, KindMismatch, ZeroVariance
from etenet.matrices import LabeledMatrix
from etenet.netmetrics import (
    AssetGraph,
    asset_graph,
    binarize,
    centralities,
    correlation_distance,
    graph_to_dot,
    nte_distance,
    pearson_matrix,
)

from conftest import make_panel
from oracles import textbook_pearson


def graph_from_edges(n, edges, directed):
    nodes = [f"n{i}" for i in range(n)]
    used = {u for e in edges for u in e[:2]}
    return AssetGraph(
        nodes=[f"n{i}" for i in sorted(used)] if edges else [],
        edges=[(f"n{u}", f"n{v}", 1.0) for u, v in edges],
        directed=directed, threshold=0.0, mode="keep-above",
    )


class TestPearson:
    def test_perfect_and_anti(self):
        x = np.linspace(-0.1, 0.1, 50)
        panel = make_panel(np.column_stack([x, -x, 2 * x]), ["A", "B", "C"])
        corr = pearson_matrix(panel)
        assert corr.loc("A", "A") == pytest.approx(1.0, abs=1e-12)
        assert corr.loc("A", "B") == pytest.approx(-1.0, abs=1e-12)
        assert corr.loc("A", "C") == pytest.approx(1.0, abs=1e-12)

    def test_matches_textbook_formula(self):
        rng = np.random.default_rng(0)
        X = rng.normal(size=(80, 3))
        corr = pearson_matrix(make_panel(X))
        for i in range(3):
            for j in range(3):
                assert corr.values[i, j] == pytest.approx(
                    textbook_pearson(X[:, i], X[:, j]), abs=1e-12)

    def test_zero_variance(self):
        panel = make_panel(np.column_stack([np.zeros(10), np.arange(10.0)]))
        with pytest.raises(ZeroVariance):
            pearson_matrix(panel)


class TestDistances:
    def test_endpoints(self):
        corr = LabeledMatrix(["A", "B"], [[1.0, 0.0], [0.0, 1.0]], "correlation")
        d = correlation_distance(corr)
        assert d.loc("A", "B") == pytest.approx(np.sqrt(2.0), abs=1e-12)
        assert d.loc("A", "A") == 0.0
        corr2 = LabeledMatrix(["A", "B"], [[1.0, -1.0], [-1.0, 1.0]], "correlation")
        assert correlation_distance(corr2).loc("A", "B") == pytest.approx(2.0, abs=1e-12)

    def test_kind_mismatch(self):
        d = LabeledMatrix(["A", "B"], [[0.0, 1.0], [1.0, 0.0]], "distance")
        with pytest.raises(KindMismatch):
            correlation_distance(d)

    def test_nte_distance_min_rule(self):
        nte = LabeledMatrix(["A", "B"], [[0.0, 0.9], [0.5, 0.0]], "nte")
        d = nte_distance(nte)
        # the smaller of the two directed distances wins: sqrt(2(1-0.9))
        assert d.loc("A", "B") == pytest.approx(np.sqrt(0.2), abs=1e-12)
        assert d.loc("B", "A") == d.loc("A", "B")
        assert d.loc("A", "A") == 0.0

    def test_nte_distance_perfect_flow(self):
        nte = LabeledMatrix(["A", "B"], [[0.0, 1.0], [1.0, 0.0]], "nte")
        assert nte_distance(nte).loc("A", "B") == pytest.approx(0.0, abs=1e-12)


class TestAssetGraph:
    def test_distance_graph_keeps_below(self):
        d = LabeledMatrix(["A", "B", "C"],
                          [[0.0, 0.5, 1.4], [0.5, 0.0, 1.4], [1.4, 1.4, 0.0]],
                          "distance")
        g = asset_graph(d, threshold=1.0)
        assert not g.directed
        assert g.nodes == ["A", "B"]       # C is isolated and dropped
        assert g.edges == [("A", "B", 0.5)]

    def test_strict_inequality(self):
        d = LabeledMatrix(["A", "B"], [[0.0, 1.0], [1.0, 0.0]], "distance")
        assert asset_graph(d, threshold=1.0).edges == []
        assert len(asset_graph(d, threshold=1.0 + 1e-9).edges) == 1

    def test_ete_graph_is_directed_keep_above(self):
        ete = LabeledMatrix(["A", "B"], [[0.0, 0.3], [0.01, 0.0]], "ete")
        g = asset_graph(ete, threshold=0.1)
        assert g.directed
        assert g.edges == [("A", "B", 0.3)]

    def test_wrong_mode_rejected(self):
        d = LabeledMatrix(["A", "B"], [[0.0, 1.0], [1.0, 0.0]], "distance")
        with pytest.raises(KindMismatch):
            asset_graph(d, threshold=1.0, mode="keep-above")

    def test_correlation_not_thresholdable(self):
        c = LabeledMatrix(["A", "B"], [[1.0, 0.0], [0.0, 1.0]], "correlation")
        with pytest.raises(KindMismatch):
            asset_graph(c, threshold=0.5)

    @given(st.integers(0, 10_000))
    @settings(max_examples=20)
    def test_edge_set_monotone_in_threshold(self, seed):
        rng = np.random.default_rng(seed)
        vals = rng.random((5, 5)) * 0.4
        np.fill_diagonal(vals, 0.0)
        ete = LabeledMatrix(list("ABCDE"), vals, "ete")
        lo = {e[:2] for e in asset_graph(ete, 0.3).edges}
        hi = {e[:2] for e in asset_graph(ete, 0.1).edges}
        assert lo <= hi


class TestBinarize:
    def test_indicator_with_zero_diagonal(self):
        ete = LabeledMatrix(["A", "B"], [[0.5, 0.3], [0.05, 0.4]], "ete")
        b = binarize(ete, 0.1)
        assert b.values.tolist() == [[0.0, 1.0], [0.0, 0.0]]
        assert b.kind == "binary"


class TestCentralities:
    def test_star_graph(self):
        g = graph_from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4)], directed=False)
        rep = centralities(graph=g)
        assert rep.values["ND"].tolist() == [4.0, 1.0, 1.0, 1.0, 1.0]
        assert rep.values["BC"].tolist() == [6.0, 0.0, 0.0, 0.0, 0.0]
        assert rep.values["EC"] == pytest.approx([1.0, 0.5, 0.5, 0.5, 0.5], abs=1e-8)
        assert rep.values["CC"] == pytest.approx([1.0, 1.75, 1.75, 1.75, 1.75])
        assert rep.values["HC"] == pytest.approx([4.0, 2.5, 2.5, 2.5, 2.5])

    def test_directed_three_cycle(self):
        g = graph_from_edges(3, [(0, 1), (1, 2), (2, 0)], directed=True)
        rep = centralities(graph=g)
        for m in ("ND_in", "ND_out", "EC_in", "EC_out"):
            assert rep.values[m] == pytest.approx([1.0, 1.0, 1.0], abs=1e-8)
        assert rep.values["HC_out"] == pytest.approx([1.5, 1.5, 1.5])
        assert rep.values["BC_dir"] == pytest.approx([1.0, 1.0, 1.0])

    def test_directed_chain_has_zero_ec(self):
        # no cycle means zero spectral radius: EC is 0 by convention
        g = graph_from_edges(3, [(0, 1), (1, 2)], directed=True)
        rep = centralities(graph=g, measures=["EC_in", "EC_out"])
        assert rep.values["EC_out"].tolist() == [0.0, 0.0, 0.0]

    def test_disconnected_components_normalized_separately(self):
        g = graph_from_edges(4, [(0, 1), (2, 3)], directed=False)
        rep = centralities(graph=g, measures=["EC", "CC"])
        assert rep.values["EC"] == pytest.approx([1.0, 1.0, 1.0, 1.0], abs=1e-8)
        # unreachable pairs are excluded from the closeness average
        assert rep.values["CC"] == pytest.approx([1.0, 1.0, 1.0, 1.0])

    def test_node_strength_signed_sums(self):
        vals = np.array([[9.0, 0.2, -0.1],
                         [0.4, 9.0, 0.0],
                         [0.0, 0.3, 9.0]])
        ete = LabeledMatrix(["A", "B", "C"], vals, "ete")
        rep = centralities(matrix=ete, measures=["NS", "NS_in", "NS_out"])
        assert rep.values["NS_out"] == pytest.approx([0.1, 0.4, 0.3])
        assert rep.values["NS_in"] == pytest.approx([0.4, 0.5, -0.1])
        assert rep.values["NS"] == pytest.approx([0.5, 0.9, 0.2])

    def test_strength_requires_matrix(self):
        g = graph_from_edges(2, [(0, 1)], directed=False)
        with pytest.raises(KindMismatch):
            centralities(graph=g, measures=["NS"])

    def test_graph_measures_require_graph(self):
        ete = LabeledMatrix(["A", "B"], [[0.0, 0.1], [0.2, 0.0]], "ete")
        with pytest.raises(EmptyGraph):
            centralities(matrix=ete, measures=["ND"])

    def test_top_includes_ties(self):
        g = graph_from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4)], directed=False)
        rep = centralities(graph=g, measures=["ND"])
        top = rep.top("ND", k=2)
        assert len(top) == 5                     # four leaves tie at rank 2
        assert top[0] == ("n0", 4.0)


class TestExports:
    def test_dot_output(self):
        g = graph_from_edges(2, [(0, 1)], directed=True)
        dot = graph_to_dot(g)
        assert dot.startswith("digraph")
        assert '"n0" -> "n1"' in dot

    def test_undirected_dot(self):
        g = graph_from_edges(2, [(0, 1)], directed=False)
        dot = graph_to_dot(g)
        assert dot.startswith("graph")
        assert '"n0" -- "n1"' in dot
