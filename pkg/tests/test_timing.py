import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tenantsim.lowering import GemmDims, lower, plan_folds
from tenantsim.pearray import ArrayConfig, Partition, run_fold
from tenantsim.timing import (
    FEED_INDEPENDENT,
    FEED_INTERLEAVED,
    cycles_per_fold,
    layer_cycles,
    plan_cycles,
)
from tenantsim.workload import LayerShape


class TestCyclesPerFold:
    def test_degenerate_1x1x1(self):
        assert cycles_per_fold(1, 1, 1) == 3

    def test_4x4_t8(self):
        assert cycles_per_fold(4, 4, 8) == 19

    def test_interleaved_two_active(self):
        assert cycles_per_fold(2, 2, 3, FEED_INTERLEAVED, n_active=2, col_start=0) == 10
        assert cycles_per_fold(2, 2, 3, FEED_INTERLEAVED, n_active=2, col_start=2) == 12

    def test_interleaved_single_active_no_upstream_matches_independent(self):
        for r, c, t in [(1, 1, 1), (3, 2, 5), (8, 8, 20)]:
            assert (cycles_per_fold(r, c, t, FEED_INTERLEAVED, 1, 0)
                    == cycles_per_fold(r, c, t))

    def test_unknown_feed_model(self):
        with pytest.raises(ValueError):
            cycles_per_fold(1, 1, 1, "bogus")

    @given(st.integers(1, 16), st.integers(1, 16), st.integers(1, 32))
    def test_monotone_in_each_dimension(self, r, c, t):
        base = cycles_per_fold(r, c, t)
        assert cycles_per_fold(r + 1, c, t) > base
        assert cycles_per_fold(r, c + 1, t) > base
        assert cycles_per_fold(r, c, t + 1) > base

    @given(st.integers(1, 16), st.integers(1, 16), st.integers(1, 32),
           st.integers(1, 4), st.integers(0, 8))
    def test_interleaved_dominates_independent(self, r, c, t, n, cs):
        assert (cycles_per_fold(r, c, t, FEED_INTERLEAVED, n, cs)
                >= cycles_per_fold(r, c, t))


class TestFormulaMatchesSimulator:
    @given(st.integers(1, 6), st.integers(1, 6), st.integers(1, 8),
           st.integers(0, 2))
    @settings(max_examples=40, deadline=None)
    def test_independent_exact(self, r_f, c_f, t, extra_cols):
        rng = np.random.default_rng(r_f * 1000 + c_f * 100 + t)
        w = rng.integers(-7, 8, (r_f, c_f))
        x = rng.integers(-7, 8, (t, r_f))
        width = c_f + extra_cols
        res = run_fold(ArrayConfig(r_f, width), Partition(0, 0, width), w, x)
        assert res.cycles_used == cycles_per_fold(r_f, c_f, t)

    @given(st.integers(1, 4), st.integers(1, 4), st.integers(1, 6),
           st.integers(1, 3), st.integers(0, 3))
    @settings(max_examples=40, deadline=None)
    def test_interleaved_exact(self, r_f, c_f, t, n_active, col_start):
        rng = np.random.default_rng(r_f + c_f * 7 + t * 31)
        w = rng.integers(-7, 8, (r_f, c_f))
        x = rng.integers(-7, 8, (t, r_f))
        cfg = ArrayConfig(r_f, col_start + c_f, feed_model=FEED_INTERLEAVED)
        res = run_fold(cfg, Partition(0, col_start, c_f), w, x,
                       n_slots=n_active, slot=0)
        assert res.cycles_used == cycles_per_fold(
            r_f, c_f, t, FEED_INTERLEAVED, n_active, col_start)


class TestPlanCycles:
    def test_sum_of_folds(self):
        plan = plan_folds(GemmDims(12, 2, 9), 8, 8)
        est = plan_cycles(plan)
        assert est.per_fold == ((8, 8 + 2 + 9 - 1), (4, 4 + 2 + 9 - 1))
        assert est.load_cycles == 12
        assert est.total == est.load_cycles + est.feed_drain_cycles
        assert est.total == cycles_per_fold(8, 2, 9) + cycles_per_fold(4, 2, 9)

    def test_layer_cycles_matches_plan(self):
        layer = LayerShape(M=2, N=1, C=3, R=2, S=2, H=4, W=4, P=3, Q=3)
        plan = plan_folds(lower(layer), 8, 8)
        assert layer_cycles(layer, 8, 8) == plan_cycles(plan)
