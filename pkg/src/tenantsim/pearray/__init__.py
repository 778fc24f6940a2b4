"""Cycle-stepped functional model of the partitioned weight-stationary array."""

from .core import BACKEND_NAME, available_backends
from .grid import PeGrid, configure
from .run import FEED_INDEPENDENT, FEED_INTERLEAVED, FoldResult, run_concurrent, run_fold
from .types import (
    ArrayConfig,
    LoadDuringCompute,
    OverlappingPartitions,
    Partition,
    PartitionOutOfBounds,
    TaggedValue,
    TileTooLarge,
    PART_BUSY,
    PART_FREE,
)

__all__ = [
    "ArrayConfig", "Partition", "TaggedValue", "PeGrid", "configure",
    "run_fold", "run_concurrent", "FoldResult",
    "FEED_INDEPENDENT", "FEED_INTERLEAVED", "PART_FREE", "PART_BUSY",
    "OverlappingPartitions", "PartitionOutOfBounds", "LoadDuringCompute",
    "TileTooLarge", "BACKEND_NAME", "available_backends",
]
