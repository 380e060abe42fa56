import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from etenet.discretize import fit_bins
from etenet.errors import LabelMismatch, ShapeTooSmall
from etenet.infotheory import te_matrix
from etenet.surrogate import (
    SurrogatePlan,
    correlation_noise_floor,
    ete_matrix,
    nte_matrix,
    rte_matrix,
    shuffle_series,
)

from conftest import make_panel


def _stack(panel, width=0.02, n_sims=10, seed=0, k=1, l=1):
    spec = fit_bins(panel.values, width)
    te = te_matrix(panel, spec, k=k, l=l)
    rte = rte_matrix(panel, spec, k=k, l=l, plan=SurrogatePlan(n_sims, seed))
    ete = ete_matrix(te, rte)
    nte = nte_matrix(ete, panel, spec)
    return spec, te, rte, ete, nte


class TestShuffle:
    def test_multiset_preserved(self):
        x = np.array([3, 1, 4, 1, 5, 9, 2, 6])
        out = shuffle_series(x, seed=0)
        assert sorted(out) == sorted(x)

    def test_singleton_unchanged(self):
        assert shuffle_series(np.array([7.0]), seed=5).tolist() == [7.0]

    def test_seed_determinism(self):
        x = np.arange(100)
        a = shuffle_series(x, seed=42)
        b = shuffle_series(x, seed=42)
        assert np.array_equal(a, b)

    @given(st.integers(0, 10_000))
    @settings(max_examples=20)
    def test_histogram_invariant(self, seed):
        rng = np.random.default_rng(seed)
        x = rng.integers(0, 5, size=50)
        out = shuffle_series(x, seed=seed)
        assert np.array_equal(np.bincount(out, minlength=5),
                              np.bincount(x, minlength=5))


class TestSurrogatePlan:
    def test_streams_are_schedule_independent(self):
        plan = SurrogatePlan(5, master_seed=1)
        # drawing (3, 2) first or last must not change its stream
        a = plan.rng(3, 2).random(4)
        plan.rng(0, 0).random(4)
        b = plan.rng(3, 2).random(4)
        assert np.array_equal(a, b)

    def test_distinct_cells_differ(self):
        plan = SurrogatePlan(5, master_seed=1)
        assert not np.array_equal(plan.rng(0, 0).random(4), plan.rng(0, 1).random(4))
        assert not np.array_equal(plan.rng(0, 0).random(4), plan.rng(1, 0).random(4))

    def test_invalid_sims(self):
        with pytest.raises(ValueError):
            SurrogatePlan(0, 0)


class TestRteEte:
    def test_rte_deterministic_and_seed_sensitive(self):
        rng = np.random.default_rng(0)
        panel = make_panel(rng.normal(scale=0.02, size=(200, 3)))
        spec = fit_bins(panel.values, 0.02)
        a = rte_matrix(panel, spec, plan=SurrogatePlan(5, 7))
        b = rte_matrix(panel, spec, plan=SurrogatePlan(5, 7))
        c = rte_matrix(panel, spec, plan=SurrogatePlan(5, 8))
        assert np.array_equal(a.values, b.values)
        assert not np.array_equal(a.values, c.values)

    def test_te_equals_rte_plus_ete_exactly(self):
        rng = np.random.default_rng(1)
        panel = make_panel(rng.normal(scale=0.02, size=(150, 4)))
        _, te, rte, ete, _ = _stack(panel, n_sims=5)
        # the identity TE = RTE + ETE, checked in its rounding-free form
        assert np.array_equal(ete.values, te.values - rte.values)

    def test_rte_bias_shrinks_with_sample_size(self):
        def mean_rte(T, seed=0):
            rng = np.random.default_rng(seed)
            panel = make_panel(rng.choice([-0.01, 0.01], size=(T, 3)))
            spec = fit_bins(panel.values, 0.01)
            rte = rte_matrix(panel, spec, plan=SurrogatePlan(10, 0))
            off = ~np.eye(3, dtype=bool)
            return rte.values[off].mean()

        assert mean_rte(4000) < mean_rte(200)

    def test_ete_near_zero_for_independent_columns(self):
        rng = np.random.default_rng(2)
        panel = make_panel(rng.normal(scale=0.02, size=(2000, 5)))
        _, _, _, ete, _ = _stack(panel, n_sims=10)
        off = ~np.eye(5, dtype=bool)
        assert np.abs(ete.values[off]).mean() <= 0.02

    def test_ete_rejects_label_mismatch(self):
        rng = np.random.default_rng(3)
        p1 = make_panel(rng.normal(scale=0.02, size=(100, 2)), ["A", "B"])
        p2 = make_panel(rng.normal(scale=0.02, size=(100, 2)), ["C", "D"])
        spec = fit_bins(np.vstack([p1.values, p2.values]), 0.02)
        te = te_matrix(p1, spec)
        rte = rte_matrix(p2, spec, plan=SurrogatePlan(2, 0))
        with pytest.raises(LabelMismatch):
            ete_matrix(te, rte)


class TestNte:
    def test_bounded_by_one(self):
        rng = np.random.default_rng(4)
        for _ in range(10):
            panel = make_panel(rng.normal(scale=0.02, size=(120, 3)))
            _, _, _, _, nte = _stack(panel, n_sims=5)
            assert np.abs(nte.values).max() <= 1.0 + 1e-9

    def test_zero_denominator_maps_to_zero(self):
        # a perfectly periodic destination has H(next|current) = 0
        rng = np.random.default_rng(5)
        periodic = np.tile([-0.01, 0.01], 60)
        noise = rng.normal(scale=0.01, size=120)
        panel = make_panel(np.column_stack([periodic, noise]), ["P", "N"])
        _, _, _, _, nte = _stack(panel, width=0.005, n_sims=3)
        assert np.all(nte.values[:, 0] == 0.0)

    def test_panel_label_mismatch(self):
        rng = np.random.default_rng(6)
        panel = make_panel(rng.normal(scale=0.02, size=(100, 2)), ["A", "B"])
        other = make_panel(panel.values, ["A", "C"])
        spec, te, rte, ete, _ = _stack(panel, n_sims=2)
        with pytest.raises(LabelMismatch):
            nte_matrix(ete, other, spec)


class TestNoiseFloor:
    def test_two_columns_approach_sqrt_two(self):
        # with only one off-diagonal pair the minimum distance concentrates
        # at sqrt(2) as T grows
        out = correlation_noise_floor(SurrogatePlan(20, 0), shape=(50_000, 2))
        assert out["min_distance_mean"] == pytest.approx(np.sqrt(2.0), abs=0.02)

    def test_deterministic(self):
        a = correlation_noise_floor(SurrogatePlan(5, 3), shape=(100, 4))
        b = correlation_noise_floor(SurrogatePlan(5, 3), shape=(100, 4))
        assert np.array_equal(a["samples"], b["samples"])

    def test_permute_real_panel(self):
        rng = np.random.default_rng(7)
        panel = make_panel(rng.normal(scale=0.02, size=(200, 5)))
        out = correlation_noise_floor(SurrogatePlan(10, 0), panel=panel,
                                      generator="permute-real-panel")
        assert 0.0 < out["min_distance_mean"] < np.sqrt(2.0)

    def test_shape_too_small(self):
        with pytest.raises(ShapeTooSmall):
            correlation_noise_floor(SurrogatePlan(2, 0), shape=(10, 4))
        with pytest.raises(ShapeTooSmall):
            correlation_noise_floor(SurrogatePlan(2, 0), shape=(100, 1))

    def test_unknown_generator(self):
        with pytest.raises(ValueError):
            correlation_noise_floor(SurrogatePlan(2, 0), shape=(100, 3),
                                    generator="bootstrap")
