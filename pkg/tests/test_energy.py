import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tenantsim.energy import (
    ACTIVITY_CLASSES,
    DEFAULT_TABLE_PJ,
    ActivityCounts,
    EnergyTable,
    MissingTableEntry,
    count_fold_activities,
    count_layer_activities,
    energy_of,
    mpj_to_pj,
)
from tenantsim.lowering import GemmDims, plan_folds
from tenantsim.pearray import ArrayConfig, Partition, run_fold
from tenantsim.timing import FEED_INDEPENDENT, FEED_INTERLEAVED

counts_st = st.builds(
    ActivityCounts,
    **{c: st.integers(0, 10**6) for c in ACTIVITY_CLASSES},
)


class TestCountFold:
    def test_independent_products(self):
        c = count_fold_activities(2, 3, 4)
        assert c.as_dict() == {
            "mac_ops": 24, "lr_writes": 6, "pass_hops": 0, "feed_reads": 8,
            "load_reads": 6, "drain_writes": 12, "drain_rmw": 0,
            "dram_reads": 6 + 8, "dram_writes": 12,
        }

    def test_interleaved_upstream_hops(self):
        c = count_fold_activities(2, 3, 4, FEED_INTERLEAVED, upstream_cols=5)
        assert c.pass_hops == 4 * 2 * 5
        assert c.mac_ops == 24  # compute volume unchanged by placement

    @given(st.integers(1, 32), st.integers(1, 32), st.integers(1, 64))
    def test_mac_ops_is_tile_volume(self, r, c, t):
        assert count_fold_activities(r, c, t).mac_ops == r * c * t


class TestCountLayer:
    def test_mac_total_is_gemm_volume(self):
        g = GemmDims(12, 5, 9)
        plan = plan_folds(g, 8, 8)
        total = count_layer_activities(plan, col_width=8)
        assert total.mac_ops == g.k * g.m * g.t

    def test_drain_rmw_for_later_k_folds(self):
        plan = plan_folds(GemmDims(12, 2, 9), 8, 8)  # k-folds of 8 and 4 rows
        total = count_layer_activities(plan, col_width=8)
        assert total.drain_rmw == 2 * 9  # one non-first k-fold: c_f * t

    def test_no_rmw_single_k_fold(self):
        plan = plan_folds(GemmDims(6, 2, 9), 8, 8)
        assert count_layer_activities(plan, col_width=8).drain_rmw == 0

    def test_independent_trailing_hops(self):
        plan = plan_folds(GemmDims(3, 2, 4), 8, 8)
        total = count_layer_activities(plan, col_width=8)
        assert total.pass_hops == 4 * 3 * (8 - 2)

    def test_interleaved_total_transit(self):
        plan = plan_folds(GemmDims(3, 2, 4), 8, 8)
        total = count_layer_activities(plan, FEED_INTERLEAVED, col_start=4,
                                       col_width=8, total_cols=16)
        # upstream (4) plus trailing (16 - 4 - 2) columns per value
        assert total.pass_hops == 4 * 3 * (4 + 10)


class TestAgainstSimulator:
    @given(st.integers(1, 5), st.integers(1, 5), st.integers(1, 6))
    @settings(max_examples=30, deadline=None)
    def test_independent_counts_match_measured(self, r_f, c_f, t):
        rng = np.random.default_rng(r_f * 97 + c_f * 13 + t)
        w = rng.integers(-7, 8, (r_f, c_f))
        x = rng.integers(-7, 8, (t, r_f))
        res = run_fold(ArrayConfig(r_f, c_f), Partition(0, 0, c_f), w, x)
        expect = count_fold_activities(r_f, c_f, t)
        for key in res.counts:
            assert res.counts[key] == getattr(expect, key), key

    def test_interleaved_counts_match_measured(self):
        rng = np.random.default_rng(11)
        r_f, c_f, t, col_start, total_cols = 3, 2, 5, 4, 9
        w = rng.integers(-7, 8, (r_f, c_f))
        x = rng.integers(-7, 8, (t, r_f))
        cfg = ArrayConfig(r_f, total_cols, feed_model=FEED_INTERLEAVED)
        res = run_fold(cfg, Partition(0, col_start, c_f), w, x)
        plan = plan_folds(GemmDims(r_f, c_f, t), r_f, c_f)
        expect = count_layer_activities(plan, FEED_INTERLEAVED,
                                        col_start=col_start, col_width=c_f,
                                        total_cols=total_cols)
        for key in res.counts:
            assert res.counts[key] == getattr(expect, key), key


class TestActivityArithmetic:
    @given(counts_st, counts_st)
    def test_add_is_fieldwise(self, a, b):
        s = a + b
        for c in ACTIVITY_CLASSES:
            assert getattr(s, c) == getattr(a, c) + getattr(b, c)

    @given(counts_st, counts_st)
    def test_energy_additive(self, a, b):
        table = EnergyTable.default()
        assert energy_of(a + b, table) == energy_of(a, table) + energy_of(b, table)


class TestEnergyTable:
    def test_fixed_point_exact(self):
        table = EnergyTable.default()
        c = ActivityCounts(mac_ops=1)
        assert energy_of(c, table) == 4600  # 4.6 pJ in milli-pJ
        assert mpj_to_pj(4600) == 4.6

    def test_missing_entry_rejected(self):
        incomplete = {c: 1.0 for c in ACTIVITY_CLASSES if c != "drain_rmw"}
        with pytest.raises(MissingTableEntry):
            EnergyTable(incomplete)

    def test_negative_rejected(self):
        bad = dict(DEFAULT_TABLE_PJ, mac_ops=-1.0)
        with pytest.raises(ValueError):
            EnergyTable(bad)

    def test_load_fixture_matches_default(self, energy_table_path):
        loaded = EnergyTable.load(str(energy_table_path))
        assert loaded.unit_mpj == EnergyTable.default().unit_mpj
