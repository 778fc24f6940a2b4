"""Activity counting and energy aggregation.

Per-fold activity counts are closed-form products validated against event
tallies from the cycle-stepped PE array. Energy is the dot product of the
counts with a user-supplied per-event energy table; arithmetic is exact
fixed-point (integer milli-picojoules, three decimal places).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields

from .lowering import FoldPlan
from .timing import FEED_INDEPENDENT, FEED_INTERLEAVED

ACTIVITY_CLASSES = (
    "mac_ops", "lr_writes", "pass_hops", "feed_reads", "load_reads",
    "drain_writes", "drain_rmw", "dram_reads", "dram_writes",
)


@dataclass
class ActivityCounts:
    mac_ops: int = 0
    lr_writes: int = 0
    pass_hops: int = 0          # horizontal forwards through non-matching PEs
    feed_reads: int = 0
    load_reads: int = 0
    drain_writes: int = 0
    drain_rmw: int = 0          # read-modify-write for cross-k-fold accumulation
    dram_reads: int = 0
    dram_writes: int = 0

    def __add__(self, other: "ActivityCounts") -> "ActivityCounts":
        return ActivityCounts(**{f.name: getattr(self, f.name) + getattr(other, f.name)
                                 for f in fields(self)})

    def __iadd__(self, other: "ActivityCounts") -> "ActivityCounts":
        for f in fields(self):
            setattr(self, f.name, getattr(self, f.name) + getattr(other, f.name))
        return self

    def as_dict(self) -> dict[str, int]:
        return {name: getattr(self, name) for name in ACTIVITY_CLASSES}


class MissingTableEntry(Exception):
    """Raised when an energy table lacks an entry for an activity class."""


# Illustrative per-event energies in pJ. Not calibrated to any silicon
# technology; replace with your own table for absolute numbers.
DEFAULT_TABLE_PJ = {
    "mac_ops": 4.6,
    "lr_writes": 1.2,
    "pass_hops": 0.9,
    "feed_reads": 6.0,
    "load_reads": 6.0,
    "drain_writes": 6.0,
    "drain_rmw": 12.0,
    "dram_reads": 200.0,
    "dram_writes": 200.0,
}


class EnergyTable:
    """Per-activity-class unit energies, held as integer milli-pJ."""

    def __init__(self, units_pj: dict[str, float], name: str = "",
                 description: str = ""):
        missing = [c for c in ACTIVITY_CLASSES if c not in units_pj]
        if missing:
            raise MissingTableEntry(f"energy table missing entries: {', '.join(missing)}")
        for c in ACTIVITY_CLASSES:
            if units_pj[c] < 0:
                raise ValueError(f"energy table entry {c!r} must be >= 0")
        self.name = name
        self.description = description
        self.unit_mpj = {c: round(units_pj[c] * 1000) for c in ACTIVITY_CLASSES}

    @classmethod
    def default(cls) -> "EnergyTable":
        return cls(DEFAULT_TABLE_PJ, name="illustrative-default",
                   description="Illustrative unit energies; not technology-calibrated.")

    @classmethod
    def load(cls, path: str) -> "EnergyTable":
        with open(path, "r", encoding="utf-8") as f:
            doc = json.load(f)
        meta = doc.get("metadata", {})
        return cls(doc.get("units_pj", {}), name=meta.get("name", ""),
                   description=meta.get("description", ""))


def energy_of(counts: ActivityCounts, table: EnergyTable) -> int:
    """Total energy in integer milli-picojoules (exact)."""
    return sum(getattr(counts, c) * table.unit_mpj[c] for c in ACTIVITY_CLASSES)


def mpj_to_pj(mpj: int) -> float:
    return mpj / 1000.0


def count_fold_activities(r_f: int, c_f: int, t: int,
                          feed_model: str = FEED_INDEPENDENT,
                          upstream_cols: int = 0) -> ActivityCounts:
    """Event counts for one fold, exclusive of cross-fold accounting.

    pass_hops covers only upstream transit (interleaved mode); hops through
    idle columns to the right of the tile, and cross-k-fold drain
    read-modify-writes, are added by count_layer_activities.
    """
    assert r_f >= 1 and c_f >= 1 and t >= 1 and upstream_cols >= 0
    if feed_model == FEED_INTERLEAVED:
        pass_hops = t * r_f * upstream_cols
    elif feed_model == FEED_INDEPENDENT:
        pass_hops = 0
    else:
        raise ValueError(f"unknown feed model {feed_model!r}")
    return ActivityCounts(
        mac_ops=r_f * c_f * t,
        lr_writes=r_f * c_f,
        pass_hops=pass_hops,
        feed_reads=r_f * t,
        load_reads=r_f * c_f,
        drain_writes=c_f * t,
        drain_rmw=0,
        dram_reads=r_f * c_f + r_f * t,
        dram_writes=c_f * t,
    )


def count_layer_activities(plan: FoldPlan, feed_model: str = FEED_INDEPENDENT,
                           col_start: int = 0, col_width: int | None = None,
                           total_cols: int | None = None) -> ActivityCounts:
    """Aggregate activity counts for a whole layer on one partition.

    Adds what the per-fold formula cannot see:
      - drain_rmw (c_f*t) for every non-first k-fold of an m-fold;
      - pass hops through the idle columns the feed stream transits beyond
        its tile: the rest of the partition (independent mode, where the
        partition is a standalone array of col_width columns) or the rest
        of the full array (interleaved mode).
    """
    if col_width is None:
        col_width = max(f.c_f for f in plan.folds)
    total = ActivityCounts()
    for f in plan.folds:
        upstream = col_start if feed_model == FEED_INTERLEAVED else 0
        c = count_fold_activities(f.r_f, f.c_f, plan.t, feed_model, upstream)
        if feed_model == FEED_INTERLEAVED:
            assert total_cols is not None
            trailing = total_cols - col_start - f.c_f
        else:
            trailing = col_width - f.c_f
        c.pass_hops += plan.t * f.r_f * trailing
        if f.k_index > 0:
            c.drain_rmw += f.c_f * plan.t
        total += c
    return total
