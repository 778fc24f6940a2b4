"""Transparent cycle-stepped PE grid.

This is the step-at-a-time model of the partitioned weight-stationary
array: per-PE load registers, tagged horizontal links, partial sums on
shared vertical links, and pass-through of foreign-tagged values. The
batch kernels in _core_py/_core_cy compute whole folds at once; this
class exists for step-level inspection, per-cycle trace dumps, and as a
cross-check of the kernels.
"""

from __future__ import annotations

import csv
from typing import IO, Optional, Sequence

import numpy as np

from .types import (
    ArrayConfig,
    LoadDuringCompute,
    OverlappingPartitions,
    Partition,
    PartitionOutOfBounds,
    TaggedValue,
    TileTooLarge,
)

NO_TAG = -1


class PeGrid:
    def __init__(self, cfg: ArrayConfig, partitions: Sequence[Partition]):
        self.cfg = cfg
        self.rows = cfg.rows
        self.cols = cfg.cols
        self.tag = [NO_TAG] * self.cols
        self.partitions = {p.part_id: p for p in partitions}
        occupied = [False] * self.cols
        for p in partitions:
            if p.col_start < 0 or p.col_end > self.cols or p.col_width < 1:
                raise PartitionOutOfBounds(
                    f"partition {p.part_id} spans [{p.col_start},{p.col_end}) on {self.cols} columns")
            for y in range(p.col_start, p.col_end):
                if occupied[y]:
                    raise OverlappingPartitions(f"column {y} claimed twice")
                occupied[y] = True
                self.tag[y] = p.part_id
        self.lr = np.zeros((self.rows, self.cols), dtype=np.int64)
        # input registers: h = tagged horizontal value, v = (value, pixel) partial sum
        self.h: list[list[Optional[TaggedValue]]] = [[None] * self.cols for _ in range(self.rows)]
        self.v: list[list[Optional[tuple[int, Optional[int]]]]] = [
            [None] * self.cols for _ in range(self.rows)]
        # per-column drain tap and per-column compute enable (fold-scoped)
        self.drain_row = [self.rows - 1] * self.cols
        self.enabled = [True] * self.cols
        self.counters = {"mac_ops": 0, "pass_hops": 0, "feed_reads": 0,
                         "drain_writes": 0, "lr_writes": 0, "load_reads": 0}
        self._cycle = 0
        self._trace: Optional[csv.writer] = None

    # -- tracing ---------------------------------------------------------

    def start_trace(self, stream: IO[str]) -> None:
        w = csv.writer(stream)
        w.writerow(["cycle", "pe_x", "pe_y", "event"])
        self._trace = w

    def stop_trace(self) -> None:
        self._trace = None

    def _emit(self, x: int, y: int, event: str) -> None:
        if self._trace is not None:
            self._trace.writerow([self._cycle, x, y, event])

    # -- load phase ------------------------------------------------------

    def step_load(self, column_inputs: dict[int, int]) -> None:
        """One weight-shift cycle: each named column's LR chain moves down
        one row and the injected value enters row 0. Values destined for
        the bottom of the tile must be injected first."""
        self._cycle += 1
        parts = {self.tag[y] for y in column_inputs}
        for y in range(self.cols):
            if self.tag[y] in parts and self._column_live(y):
                raise LoadDuringCompute(
                    f"column {y} carries live data; cannot load partition {self.tag[y]}")
        for y, w in column_inputs.items():
            for x in range(self.rows - 1, 0, -1):
                self.lr[x, y] = self.lr[x - 1, y]
            self.lr[0, y] = w
            self.counters["load_reads"] += 1
            self._emit(0, y, "load")

    def _column_live(self, y: int) -> bool:
        return any(self.h[x][y] is not None or self.v[x][y] is not None
                   for x in range(self.rows))

    # -- compute phase ---------------------------------------------------

    def step_compute(self, row_inputs: Optional[Sequence[Optional[TaggedValue]]] = None,
                     top_inputs: Optional[dict[int, int]] = None,
                     ) -> list[Optional[tuple[int, Optional[int]]]]:
        """One cycle for all PEs in parallel, using registered
        (previous-cycle) inputs. Returns the per-column drain outputs.
        row_inputs/top_inputs are latched onto the edge links for the
        *next* cycle."""
        self._cycle += 1
        v_out: list[list[Optional[tuple[int, Optional[int]]]]] = [
            [None] * self.cols for _ in range(self.rows)]
        for x in range(self.rows):
            for y in range(self.cols):
                base = self.v[x][y]
                hv = self.h[x][y]
                if hv is not None and hv.tag == self.tag[y] and self.tag[y] != NO_TAG \
                        and self.enabled[y]:
                    acc = (base[0] if base is not None else 0) + hv.value * int(self.lr[x, y])
                    v_out[x][y] = (acc, hv.pixel if hv.pixel is not None
                                   else (base[1] if base is not None else None))
                    self.counters["mac_ops"] += 1
                    self._emit(x, y, "mac")
                else:
                    if hv is not None:
                        self.counters["pass_hops"] += 1
                        self._emit(x, y, "pass")
                    v_out[x][y] = base

        drains: list[Optional[tuple[int, Optional[int]]]] = [None] * self.cols
        for y in range(self.cols):
            d = self.drain_row[y]
            if v_out[d][y] is not None:
                drains[y] = v_out[d][y]
                v_out[d][y] = None  # consumed by the drain buffer
                self.counters["drain_writes"] += 1
                self._emit(d, y, "drain")

        for x in range(self.rows - 1, 0, -1):
            for y in range(self.cols):
                self.v[x][y] = v_out[x - 1][y]
        for y in range(self.cols):
            self.v[0][y] = None
        for x in range(self.rows):
            for y in range(self.cols - 1, 0, -1):
                self.h[x][y] = self.h[x][y - 1]
            self.h[x][0] = None

        if row_inputs is not None:
            for x, tv in enumerate(row_inputs):
                if tv is not None:
                    self.h[x][0] = tv
                    self.counters["feed_reads"] += 1
        if top_inputs is not None:
            for y, val in top_inputs.items():
                self.v[0][y] = (val, None)
        return drains

    # -- whole-fold orchestration (reference path) -----------------------

    def run_fold_stepped(self, part_id: int, weights: np.ndarray,
                         inputs: np.ndarray) -> tuple[np.ndarray, int, dict[str, int]]:
        """Run one fold through the step-level model. Same contract as the
        batch kernels (standalone partition, independent feed); used for
        cross-checks and traced runs."""
        part = self.partitions[part_id]
        weights = np.asarray(weights, dtype=np.int64)
        inputs = np.asarray(inputs, dtype=np.int64)
        r_f, c_f = weights.shape
        t = inputs.shape[0]
        if r_f > self.rows or c_f > part.col_width:
            raise TileTooLarge(f"{r_f}x{c_f} tile on {self.rows}x{part.col_width} partition")
        before = dict(self.counters)
        tile_cols = range(part.col_start, part.col_start + c_f)
        for y in range(part.col_start, part.col_end):
            self.enabled[y] = y in tile_cols
            self.drain_row[y] = r_f - 1
        try:
            for j in range(r_f):  # bottom tile row first
                self.step_load({y: int(weights[r_f - 1 - j, y - part.col_start])
                                for y in tile_cols})
            self.counters["lr_writes"] += r_f * c_f
            outputs = np.zeros((t, c_f), dtype=np.int64)
            drained = 0
            last_drain = 0
            cycle = 0
            while drained < t * c_f or any(self._column_live(y) for y in range(self.cols)):
                cycle += 1
                row_inputs: list[Optional[TaggedValue]] = [None] * self.rows
                for x in range(r_f):
                    p = cycle - 1 - x
                    if 0 <= p < t:
                        row_inputs[x] = TaggedValue(int(inputs[p, x]), part_id, pixel=p)
                outs = self.step_compute(row_inputs)
                for y in tile_cols:
                    if outs[y] is not None:
                        val, pix = outs[y]
                        assert pix is not None
                        outputs[pix, y - part.col_start] = val
                        drained += 1
                        last_drain = cycle
            cycles_used = r_f + last_drain
        finally:
            for y in range(part.col_start, part.col_end):
                self.enabled[y] = True
                self.drain_row[y] = self.rows - 1
        counts = {k: self.counters[k] - before[k] for k in self.counters}
        return outputs, cycles_used, counts


def configure(cfg: ArrayConfig, partitions: Sequence[Partition]) -> PeGrid:
    """Allocate a grid with every PE tagged by its owning partition."""
    return PeGrid(cfg, partitions)
