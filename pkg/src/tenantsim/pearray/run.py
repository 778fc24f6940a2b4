"""Whole-fold execution on the selected kernel backend."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import core
from .types import ArrayConfig, Partition, TileTooLarge

FEED_INDEPENDENT = "independent"
FEED_INTERLEAVED = "interleaved"


@dataclass
class FoldResult:
    outputs: np.ndarray  # int64[t, c_f], exact per-column per-pixel dot products
    cycles_used: int
    counts: dict[str, int]


def _check_tile(cfg: ArrayConfig, part: Partition, weights: np.ndarray) -> None:
    r_f, c_f = weights.shape
    if r_f > cfg.rows or c_f > part.col_width:
        raise TileTooLarge(
            f"{r_f}x{c_f} tile does not fit {cfg.rows}x{part.col_width} partition")


def run_fold(cfg: ArrayConfig, part: Partition, weights: np.ndarray,
             inputs: np.ndarray, n_slots: int = 1, slot: int = 0) -> FoldResult:
    """One fold on one partition.

    independent feed: the partition is a standalone array of col_width
    columns. interleaved feed: the fold runs on the full-width grid,
    entering at the array's left edge with the left-edge row links
    round-robin shared over n_slots injection slots (co-tenant slots may
    be empty); upstream and downstream columns pass the stream through.
    """
    weights = np.asarray(weights, dtype=np.int64)
    inputs = np.asarray(inputs, dtype=np.int64)
    _check_tile(cfg, part, weights)
    if inputs.shape[1] != weights.shape[0]:
        raise ValueError("input stream vectors must have length r_f")
    if cfg.feed_model == FEED_INDEPENDENT:
        res = core.simulate(part.col_width, 1, [(0, 0, weights, inputs)])
    elif cfg.feed_model == FEED_INTERLEAVED:
        res = core.simulate(cfg.cols, n_slots, [(slot, part.col_start, weights, inputs)])
    else:
        raise ValueError(f"unknown feed model {cfg.feed_model!r}")
    out, cycles, counts = res[0]
    return FoldResult(outputs=out, cycles_used=cycles, counts=counts)


def run_concurrent(cfg: ArrayConfig,
                   assignments: list[tuple[Partition, np.ndarray, np.ndarray]],
                   ) -> list[FoldResult]:
    """One fold per partition, all partitions at once.

    independent feed simulates each partition as a standalone array;
    interleaved feed runs all streams through one full-width grid with
    round-robin left-edge injection. Numerical outputs are identical in
    both modes.
    """
    for part, w, x in assignments:
        _check_tile(cfg, part, np.asarray(w))
    if cfg.feed_model == FEED_INDEPENDENT:
        return [run_fold(cfg, part, w, x) for part, w, x in assignments]
    n = len(assignments)
    ordered = sorted(range(n), key=lambda i: assignments[i][0].col_start)
    batch = [(slot, assignments[i][0].col_start,
              np.asarray(assignments[i][1], dtype=np.int64),
              np.asarray(assignments[i][2], dtype=np.int64))
             for slot, i in enumerate(ordered)]
    raw = core.simulate(cfg.cols, n, batch)
    results: list[FoldResult] = [None] * n  # type: ignore[list-item]
    for slot, i in enumerate(ordered):
        out, cycles, counts = raw[slot]
        results[i] = FoldResult(outputs=out, cycles_used=cycles, counts=counts)
    return results
