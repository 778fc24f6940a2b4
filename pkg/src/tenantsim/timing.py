"""Closed-form cycle model for one layer on one vertical partition.

The formulas are definitions whose authority is exact agreement with the
cycle-stepped PE-array simulator: a fold of an r_f x c_f weight tile with
t streamed pixels costs r_f load cycles plus a feed/drain span measured
from the fold's first left-edge injection to its last bottom drain. Folds
execute back-to-back with no overlap because load traffic and partial
sums share the vertical links.
"""

from __future__ import annotations

from dataclasses import dataclass

from .lowering import FoldPlan, lower, plan_folds
from .workload import LayerShape

FEED_INDEPENDENT = "independent"
FEED_INTERLEAVED = "interleaved"


@dataclass(frozen=True)
class CycleEstimate:
    load_cycles: int
    feed_drain_cycles: int
    total: int
    per_fold: tuple[tuple[int, int], ...]  # (load, feed_drain) per fold


def cycles_per_fold(r_f: int, c_f: int, t: int, feed_model: str = FEED_INDEPENDENT,
                    n_active: int = 1, col_start: int = 0) -> int:
    """Cycles for one fold: load phase plus feed/drain span.

    independent: the partition behaves as a standalone array,
        r_f + (t + r_f + c_f - 1).
    interleaved: left-edge row links are round-robin shared by n_active
        partitions and the stream transits col_start upstream columns,
        r_f + (n_active*(t-1) + 1) + r_f + c_f + col_start - 1.
    """
    assert r_f >= 1 and c_f >= 1 and t >= 1 and n_active >= 1 and col_start >= 0
    if feed_model == FEED_INDEPENDENT:
        return 2 * r_f + c_f + t - 1
    if feed_model == FEED_INTERLEAVED:
        return r_f + (n_active * (t - 1) + 1) + r_f + c_f + col_start - 1
    raise ValueError(f"unknown feed model {feed_model!r}")


def plan_cycles(plan: FoldPlan, feed_model: str = FEED_INDEPENDENT,
                n_active: int = 1, col_start: int = 0) -> CycleEstimate:
    per_fold = []
    for f in plan.folds:
        total = cycles_per_fold(f.r_f, f.c_f, plan.t, feed_model, n_active, col_start)
        per_fold.append((f.r_f, total - f.r_f))
    load = sum(p[0] for p in per_fold)
    feed = sum(p[1] for p in per_fold)
    return CycleEstimate(load_cycles=load, feed_drain_cycles=feed,
                         total=load + feed, per_fold=tuple(per_fold))


def layer_cycles(layer: LayerShape, part_rows: int, part_cols: int,
                 feed_model: str = FEED_INDEPENDENT, n_active: int = 1,
                 col_start: int = 0) -> CycleEstimate:
    """Total cycles for one layer on a partition: sum over its folds."""
    plan = plan_folds(lower(layer), part_rows, part_cols)
    return plan_cycles(plan, feed_model, n_active, col_start)
