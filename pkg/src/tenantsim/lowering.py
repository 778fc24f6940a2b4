"""Layer-to-GEMM lowering and fold (tiling) planning for a partition.

A weight-stationary partition consumes one layer as a GEMM: the reduction
dimension k = C*R*S maps to PE rows, output channels m = M map to PE
columns, and t = N*P*Q output pixels stream through over time. When the
GEMM exceeds the partition, it is tiled into folds; fold order is k-major
so partial sums for one output-column group complete before the next.
"""

from __future__ import annotations

from dataclasses import dataclass

from .workload import LayerShape


@dataclass(frozen=True)
class GemmDims:
    k: int  # reduction length, mapped to PE rows
    m: int  # output channels, mapped to PE columns
    t: int  # output pixels streamed over time


@dataclass(frozen=True)
class FoldTile:
    k_index: int
    m_index: int
    k_offset: int
    m_offset: int
    r_f: int  # tile rows (<= part_rows)
    c_f: int  # tile columns (<= part_cols)


@dataclass(frozen=True)
class FoldPlan:
    k_folds: int
    m_folds: int
    t: int
    folds: tuple[FoldTile, ...]


def lower(layer: LayerShape) -> GemmDims:
    """im2col view of one layer: k = C*R*S, m = M, t = N*P*Q."""
    return GemmDims(k=layer.C * layer.R * layer.S, m=layer.M, t=layer.N * layer.P * layer.Q)


def plan_folds(g: GemmDims, part_rows: int, part_cols: int) -> FoldPlan:
    """Tile a GEMM onto a part_rows x part_cols partition, k-major order.

    Edge tiles are truncated; all k-folds of one m-fold run before the
    next m-fold so cross-k partial-sum accumulation stays within one
    output-column group.
    """
    assert part_rows >= 1 and part_cols >= 1
    k_folds = -(-g.k // part_rows)
    m_folds = -(-g.m // part_cols)
    folds = []
    for mi in range(m_folds):
        m_off = mi * part_cols
        c_f = min(part_cols, g.m - m_off)
        for ki in range(k_folds):
            k_off = ki * part_rows
            r_f = min(part_rows, g.k - k_off)
            folds.append(FoldTile(k_index=ki, m_index=mi, k_offset=k_off,
                                  m_offset=m_off, r_f=r_f, c_f=c_f))
    return FoldPlan(k_folds=k_folds, m_folds=m_folds, t=g.t, folds=tuple(folds))
