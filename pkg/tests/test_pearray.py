import io

import numpy as np
import pytest

from tenantsim.pearray import (
    ArrayConfig,
    LoadDuringCompute,
    OverlappingPartitions,
    Partition,
    PartitionOutOfBounds,
    PeGrid,
    TaggedValue,
    TileTooLarge,
    configure,
    run_concurrent,
    run_fold,
)
from tenantsim.pearray import _core_py
from tenantsim.pearray import core


def grid_1p(rows, cols):
    return configure(ArrayConfig(rows, cols), [Partition(0, 0, cols)])


class TestConfigure:
    def test_two_partitions_tag_columns(self):
        g = configure(ArrayConfig(6, 6), [Partition(0, 0, 3), Partition(1, 3, 3)])
        assert g.tag == [0, 0, 0, 1, 1, 1]

    def test_single_partition_all_same_tag(self):
        g = grid_1p(4, 4)
        assert set(g.tag) == {0}

    def test_overlap_rejected(self):
        with pytest.raises(OverlappingPartitions):
            configure(ArrayConfig(6, 6), [Partition(0, 0, 4), Partition(1, 2, 4)])

    def test_out_of_bounds_rejected(self):
        with pytest.raises(PartitionOutOfBounds):
            configure(ArrayConfig(4, 4), [Partition(0, 2, 4)])

    def test_idle_columns_allowed(self):
        g = configure(ArrayConfig(4, 6), [Partition(0, 0, 2)])
        assert g.tag[2:] == [-1] * 4


class TestStepLoad:
    def test_single_cycle_single_pe(self):
        g = grid_1p(1, 1)
        g.step_load({0: 7})
        assert g.lr[0, 0] == 7

    def test_three_cycle_shift_bottom_first(self):
        g = grid_1p(3, 1)
        for w in (12, 11, 10):  # weight for row 2 first
            g.step_load({0: w})
        assert list(g.lr[:, 0]) == [10, 11, 12]

    def test_load_isolated_to_partition(self):
        g = configure(ArrayConfig(2, 4), [Partition(0, 0, 2), Partition(1, 2, 2)])
        g.lr[:, 2:] = 9
        g.step_load({0: 5, 1: 5})
        assert (g.lr[:, 2:] == 9).all()

    def test_load_during_compute_rejected(self):
        g = grid_1p(2, 2)
        g.step_compute([TaggedValue(1, 0), None])
        with pytest.raises(LoadDuringCompute):
            g.step_load({0: 3})


class TestStepCompute:
    def test_matching_tag_mac(self):
        g = grid_1p(1, 1)
        g.lr[0, 0] = 3
        g.step_compute([TaggedValue(5, 0)], top_inputs={0: 2})
        out = g.step_compute()
        assert out[0] == (17, None)

    def test_mismatched_tag_passes_through(self):
        g = configure(ArrayConfig(1, 2), [Partition(0, 0, 1), Partition(1, 1, 1)])
        g.lr[0, 0] = 3
        g.step_compute([TaggedValue(5, 1)], top_inputs={0: 2})
        out = g.step_compute()
        assert out[0] == (2, None)  # partial sum unchanged
        # the foreign value was forwarded right and is now registered at column 1
        assert g.h[0][1] == TaggedValue(5, 1)

    def test_2x2_skewed_matmul(self):
        g = grid_1p(2, 2)
        # weights [[1,2],[3,4]] via bottom-row-first column loads
        g.step_load({0: 3, 1: 4})
        g.step_load({0: 1, 1: 2})
        outs = []
        for c in range(1, 7):
            row_inputs = [None, None]
            if c == 1:
                row_inputs[0] = TaggedValue(5, 0, pixel=0)
            if c == 2:
                row_inputs[1] = TaggedValue(6, 0, pixel=0)
            outs.append(g.step_compute(row_inputs))
        col0 = [(c, o[0]) for c, o in enumerate(outs, 1) if o[0] is not None]
        col1 = [(c, o[1]) for c, o in enumerate(outs, 1) if o[1] is not None]
        assert col0 == [(3, (5 * 1 + 6 * 3, 0))]
        assert col1 == [(4, (5 * 2 + 6 * 4, 0))]  # one column later


class TestRunFold:
    def test_degenerate_1x1x1(self):
        res = run_fold(ArrayConfig(1, 1), Partition(0, 0, 1),
                       np.array([[2]]), np.array([[3]]))
        assert res.outputs.tolist() == [[6]]
        assert res.cycles_used == 3  # 1 load + 2 propagate

    def test_selector_weights(self):
        w = np.array([[1], [0]])
        x = np.array([[7, 3], [4, 9], [5, 1]])
        res = run_fold(ArrayConfig(2, 1), Partition(0, 0, 1), w, x)
        assert res.outputs[:, 0].tolist() == [7, 4, 5]

    def test_random_4x4_t8(self):
        rng = np.random.default_rng(1)
        w = rng.integers(-7, 8, (4, 4))
        x = rng.integers(-7, 8, (8, 4))
        res = run_fold(ArrayConfig(4, 4), Partition(0, 0, 4), w, x)
        assert np.array_equal(res.outputs, x @ w)
        assert res.cycles_used == 19

    def test_tile_too_large(self):
        with pytest.raises(TileTooLarge):
            run_fold(ArrayConfig(2, 2), Partition(0, 0, 2),
                     np.zeros((3, 2), dtype=np.int64), np.zeros((1, 3), dtype=np.int64))

    def test_trailing_idle_columns_pass(self):
        # tile narrower than the partition: stream passes the trailing columns
        w = np.array([[2, 3]])
        x = np.array([[1], [2]])
        res = run_fold(ArrayConfig(1, 5), Partition(0, 0, 5), w, x)
        assert np.array_equal(res.outputs, x @ w)
        assert res.counts["pass_hops"] == 2 * 1 * (5 - 2)  # t * r_f * trailing


class TestRunConcurrent:
    @pytest.mark.parametrize("feed_model", ["independent", "interleaved"])
    def test_two_partitions_match_standalone(self, feed_model):
        rng = np.random.default_rng(2)
        cfg = ArrayConfig(2, 4, feed_model=feed_model)
        parts = [Partition(0, 0, 2), Partition(1, 2, 2)]
        tiles = [(rng.integers(-7, 8, (2, 2)), rng.integers(-7, 8, (5, 2)))
                 for _ in parts]
        res = run_concurrent(cfg, [(p, w, x) for p, (w, x) in zip(parts, tiles)])
        for (w, x), r in zip(tiles, res):
            assert np.array_equal(r.outputs, x @ w)

    @pytest.mark.parametrize("feed_model", ["independent", "interleaved"])
    def test_single_partition_degenerates_to_run_fold(self, feed_model):
        rng = np.random.default_rng(3)
        w = rng.integers(-7, 8, (3, 2))
        x = rng.integers(-7, 8, (4, 3))
        cfg = ArrayConfig(3, 2, feed_model=feed_model)
        part = Partition(0, 0, 2)
        a = run_fold(ArrayConfig(3, 2), part, w, x)
        b = run_concurrent(cfg, [(part, w, x)])[0]
        assert np.array_equal(a.outputs, b.outputs)

    def test_pass_through_idle_upstream_partition(self):
        # partition 1 active behind a 2-wide idle partition 0
        rng = np.random.default_rng(4)
        w = rng.integers(-7, 8, (2, 2))
        x = rng.integers(-7, 8, (3, 2))
        cfg = ArrayConfig(2, 4, feed_model="interleaved")
        res = run_fold(cfg, Partition(1, 2, 2), w, x, n_slots=1, slot=0)
        assert np.array_equal(res.outputs, x @ w)
        # hops: 2 upstream + 0 trailing per value
        assert res.counts["pass_hops"] == 3 * 2 * 2

    def test_partition_isolation(self):
        rng = np.random.default_rng(5)
        cfg = ArrayConfig(2, 4, feed_model="interleaved")
        parts = [Partition(0, 0, 2), Partition(1, 2, 2)]
        w0, x0 = rng.integers(-7, 8, (2, 2)), rng.integers(-7, 8, (4, 2))
        w1, x1 = rng.integers(-7, 8, (2, 2)), rng.integers(-7, 8, (4, 2))
        base = run_concurrent(cfg, [(parts[0], w0, x0), (parts[1], w1, x1)])
        x0b = x0.copy()
        x0b[0, 0] += 3  # perturb partition 0's input only
        pert = run_concurrent(cfg, [(parts[0], w0, x0b), (parts[1], w1, x1)])
        assert np.array_equal(base[1].outputs, pert[1].outputs)
        assert not np.array_equal(base[0].outputs, pert[0].outputs)


class TestSteppedVsKernel:
    def test_run_fold_stepped_matches_kernel(self):
        rng = np.random.default_rng(6)
        for _ in range(10):
            r_f = int(rng.integers(1, 4))
            c_f = int(rng.integers(1, 4))
            width = c_f + int(rng.integers(0, 3))
            t = int(rng.integers(1, 6))
            w = rng.integers(-7, 8, (r_f, c_f))
            x = rng.integers(-7, 8, (t, r_f))
            g = configure(ArrayConfig(max(r_f, 2), width), [Partition(0, 0, width)])
            out_s, cyc_s, cnt_s = g.run_fold_stepped(0, w, x)
            res = run_fold(ArrayConfig(max(r_f, 2), width), Partition(0, 0, width), w, x)
            assert np.array_equal(out_s, res.outputs)
            assert cyc_s == res.cycles_used
            for key in ("mac_ops", "pass_hops", "feed_reads", "drain_writes",
                        "lr_writes", "load_reads"):
                assert cnt_s[key] == res.counts[key], key

    def test_trace_dump_csv(self):
        g = grid_1p(1, 1)
        buf = io.StringIO()
        g.start_trace(buf)
        g.run_fold_stepped(0, np.array([[2]]), np.array([[3]]))
        g.stop_trace()
        lines = buf.getvalue().strip().splitlines()
        assert lines[0] == "cycle,pe_x,pe_y,event"
        events = [l.split(",")[3] for l in lines[1:]]
        assert events == ["load", "mac", "drain"]


class TestBackends:
    def test_backends_agree(self):
        rng = np.random.default_rng(7)
        assert "python" in core.available_backends()
        asg = [(0, 0, rng.integers(-7, 8, (3, 2)), rng.integers(-7, 8, (5, 3))),
               (1, 2, rng.integers(-7, 8, (2, 2)), rng.integers(-7, 8, (4, 2)))]
        a = _core_py.simulate(6, 2, asg)
        b = core.simulate(6, 2, asg)
        for (o1, c1, n1), (o2, c2, n2) in zip(a, b):
            assert np.array_equal(o1, o2) and c1 == c2 and n1 == n2
