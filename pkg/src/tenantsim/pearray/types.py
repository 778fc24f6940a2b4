"""Shared PE-array value types and errors."""

from __future__ import annotations

from dataclasses import dataclass

from ..workload import LayerRef

PART_FREE = "free"
PART_BUSY = "busy"


@dataclass(frozen=True)
class ArrayConfig:
    rows: int
    cols: int
    feed_model: str = "independent"


@dataclass
class Partition:
    """A contiguous full-height range of PE columns."""

    part_id: int
    col_start: int
    col_width: int
    state: str = PART_FREE
    assignment: LayerRef | None = None

    @property
    def col_end(self) -> int:
        return self.col_start + self.col_width


@dataclass(frozen=True)
class TaggedValue:
    value: int
    tag: int
    pixel: int | None = None


class OverlappingPartitions(Exception):
    pass


class PartitionOutOfBounds(Exception):
    pass


class LoadDuringCompute(Exception):
    """A partition cannot load while its columns carry live partial sums."""


class TileTooLarge(Exception):
    pass
