"""Dynamic vertical-partitioning scheduler and the sequential baseline.

The partitioned policy: the first-arriving layer takes the whole array;
when the array is fully idle and several layers are ready, it is split
into equal-width vertical partitions (floor division, remainder columns
idle); otherwise layers are assigned whole to merged free regions. Ready
layers are prioritized by their MAC-count metric, largest first, and the
largest layer gets the widest region. Running layers are never preempted
or migrated.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .energy import ActivityCounts, count_layer_activities
from .lowering import lower, plan_folds
from .pearray.types import PART_BUSY, PART_FREE, Partition
from .timing import FEED_INDEPENDENT, FEED_INTERLEAVED, plan_cycles
from .workload import DnnGraph, LayerRef, Workload, opr_count, validate_workload

MODE_PARTITIONED = "partitioned"
MODE_BASELINE = "baseline"


class TooManyTasks(Exception):
    pass


@dataclass(frozen=True)
class TaskQueueEntry:
    layer: LayerRef
    mac_priority: int
    ready_at: int
    arrival_time: int  # owning DNN's arrival, for tie-breaking


@dataclass(frozen=True)
class ScheduleEvent:
    kind: str  # layer_start | layer_end | repartition | merge | dnn_arrival | dnn_done
    time: int
    layer: LayerRef | None
    partitions: tuple[tuple[int, int, str], ...]  # (col_start, col_width, state)


@dataclass
class LayerRecord:
    dnn_id: str
    layer_index: int
    col_start: int
    col_width: int
    start: int
    end: int
    cycles: int
    n_active: int
    activities: ActivityCounts


@dataclass
class Trace:
    mode: str
    rows: int
    cols: int
    feed_model: str
    events: list[ScheduleEvent] = field(default_factory=list)
    layers: list[LayerRecord] = field(default_factory=list)

    @property
    def makespan(self) -> int:
        return max((r.end for r in self.layers), default=0)

    def per_dnn_completion(self) -> dict[str, int]:
        done: dict[str, int] = {}
        for r in self.layers:
            done[r.dnn_id] = max(done.get(r.dnn_id, 0), r.end)
        return done

    def total_activities(self) -> ActivityCounts:
        total = ActivityCounts()
        for r in self.layers:
            total += r.activities
        return total

    def busy_pe_cycles(self) -> int:
        return sum(self.rows * r.col_width * r.cycles for r in self.layers)

    def fingerprint(self) -> tuple:
        return (self.rows, self.cols,
                tuple(sorted((r.dnn_id, r.layer_index) for r in self.layers)))


def partition_calculation(n_tasks: int, array_cols: int) -> list[int]:
    """Equal widths floor(array_cols / n_tasks); remainder columns idle."""
    if n_tasks < 1:
        raise ValueError("n_tasks must be >= 1")
    if n_tasks > array_cols:
        raise TooManyTasks(f"{n_tasks} tasks exceed {array_cols} columns")
    return [array_cols // n_tasks] * n_tasks


def _entry_key(e: TaskQueueEntry):
    return (-e.mac_priority, e.arrival_time, e.layer.dnn_id, e.layer.layer_index)


def task_assignment(ready: list[TaskQueueEntry],
                    free_regions: list[Partition],
                    ) -> list[tuple[TaskQueueEntry, Partition]]:
    """Largest-MAC layer to widest free region, pairwise."""
    entries = sorted(ready, key=_entry_key)
    regions = sorted(free_regions, key=lambda p: (-p.col_width, p.col_start))
    return list(zip(entries, regions))


def merge_free(parts: list[Partition], next_id: int) -> tuple[list[Partition], int, bool]:
    """Coalesce maximal runs of adjacent free partitions; busy untouched.

    Returns the normalized set (sorted by col_start), the next unused
    partition id, and whether anything merged.
    """
    ordered = sorted(parts, key=lambda p: p.col_start)
    merged: list[Partition] = []
    changed = False
    for p in ordered:
        if (merged and p.state == PART_FREE and merged[-1].state == PART_FREE
                and merged[-1].col_end == p.col_start):
            prev = merged.pop()
            merged.append(Partition(next_id, prev.col_start,
                                    prev.col_width + p.col_width, PART_FREE))
            next_id += 1
            changed = True
        else:
            merged.append(p)
    return merged, next_id, changed


def _snapshot(parts: list[Partition]) -> tuple[tuple[int, int, str], ...]:
    return tuple((p.col_start, p.col_width, p.state)
                 for p in sorted(parts, key=lambda p: p.col_start))


def _layer_shape(w: Workload, ref: LayerRef):
    for d in w.dnns:
        if d.dnn_id == ref.dnn_id:
            return d.layers[ref.layer_index]
    raise KeyError(ref)


def _topo_order(d: DnnGraph) -> list[int]:
    n = len(d.layers)
    indeg = [0] * n
    adj: list[list[int]] = [[] for _ in range(n)]
    for a, b in d.edges:
        adj[a].append(b)
        indeg[b] += 1
    import heapq
    heap = [i for i in range(n) if indeg[i] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        u = heapq.heappop(heap)
        order.append(u)
        for v in adj[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                heapq.heappush(heap, v)
    return order


def _layer_run(w: Workload, ref: LayerRef, rows: int, width: int, feed_model: str,
               n_active: int, col_start: int, total_cols: int) -> tuple[int, ActivityCounts]:
    shape = _layer_shape(w, ref)
    plan = plan_folds(lower(shape), rows, width)
    est = plan_cycles(plan, feed_model, n_active, col_start)
    acts = count_layer_activities(plan, feed_model, col_start=col_start,
                                  col_width=width, total_cols=total_cols)
    return est.total, acts


def run_schedule(w: Workload, rows: int, cols: int, mode: str = MODE_PARTITIONED,
                 feed_model: str = FEED_INDEPENDENT) -> Trace:
    """Event-driven schedule of a whole workload; deterministic."""
    validate_workload(w)
    if mode == MODE_BASELINE:
        return _run_baseline(w, rows, cols, feed_model)
    if mode != MODE_PARTITIONED:
        raise ValueError(f"unknown mode {mode!r}")
    return _run_partitioned(w, rows, cols, feed_model)


def _run_baseline(w: Workload, rows: int, cols: int, feed_model: str) -> Trace:
    trace = Trace(mode=MODE_BASELINE, rows=rows, cols=cols, feed_model=feed_model)
    full = ((0, cols, PART_BUSY),)
    cursor = 0
    for d in sorted(w.dnns, key=lambda d: (d.arrival_time, d.dnn_id)):
        trace.events.append(ScheduleEvent("dnn_arrival", d.arrival_time, None, full))
        cursor = max(cursor, d.arrival_time)
        for li in _topo_order(d):
            ref = LayerRef(d.dnn_id, li)
            cycles, acts = _layer_run(w, ref, rows, cols, feed_model, 1, 0, cols)
            trace.events.append(ScheduleEvent("layer_start", cursor, ref, full))
            trace.layers.append(LayerRecord(d.dnn_id, li, 0, cols, cursor,
                                            cursor + cycles, cycles, 1, acts))
            cursor += cycles
            trace.events.append(ScheduleEvent("layer_end", cursor, ref, full))
        trace.events.append(ScheduleEvent("dnn_done", cursor, None, full))
    trace.events.sort(key=lambda e: e.time)
    return trace


def _run_partitioned(w: Workload, rows: int, cols: int, feed_model: str) -> Trace:
    trace = Trace(mode=MODE_PARTITIONED, rows=rows, cols=cols, feed_model=feed_model)
    dnns = {d.dnn_id: d for d in w.dnns}

    indeg: dict[LayerRef, int] = {}
    succ: dict[LayerRef, list[LayerRef]] = {}
    for d in w.dnns:
        for i in range(len(d.layers)):
            ref = LayerRef(d.dnn_id, i)
            indeg[ref] = 0
            succ[ref] = []
        for a, b in d.edges:
            indeg[LayerRef(d.dnn_id, b)] += 1
            succ[LayerRef(d.dnn_id, a)].append(LayerRef(d.dnn_id, b))

    remaining = {d.dnn_id: len(d.layers) for d in w.dnns}
    arrivals = sorted(w.dnns, key=lambda d: (d.arrival_time, d.dnn_id))
    arr_idx = 0
    ready: list[TaskQueueEntry] = []
    parts: list[Partition] = [Partition(0, 0, cols, PART_FREE)]
    next_pid = 1
    running: list[tuple[int, int, LayerRef]] = []  # (end_time, part_id, layer)
    started_any = False

    def mk_entry(ref: LayerRef, at: int) -> TaskQueueEntry:
        d = dnns[ref.dnn_id]
        return TaskQueueEntry(ref, opr_count(d.layers[ref.layer_index]),
                              ready_at=max(at, d.arrival_time),
                              arrival_time=d.arrival_time)

    while ready or running or arr_idx < len(arrivals):
        times = []
        if running:
            times.append(min(r[0] for r in running))
        if arr_idx < len(arrivals):
            times.append(arrivals[arr_idx].arrival_time)
        now = min(times)

        # completions
        finishing = sorted([r for r in running if r[0] == now],
                           key=lambda r: (r[2].dnn_id, r[2].layer_index))
        running = [r for r in running if r[0] != now]
        for _, pid, ref in finishing:
            for p in parts:
                if p.part_id == pid:
                    p.state = PART_FREE
                    p.assignment = None
            trace.events.append(ScheduleEvent("layer_end", now, ref, _snapshot(parts)))
            remaining[ref.dnn_id] -= 1
            if remaining[ref.dnn_id] == 0:
                trace.events.append(ScheduleEvent("dnn_done", now, None, _snapshot(parts)))
            for s in succ[ref]:
                indeg[s] -= 1
                if indeg[s] == 0:
                    ready.append(mk_entry(s, now))

        # arrivals
        while arr_idx < len(arrivals) and arrivals[arr_idx].arrival_time == now:
            d = arrivals[arr_idx]
            arr_idx += 1
            trace.events.append(ScheduleEvent("dnn_arrival", now, None, _snapshot(parts)))
            for i in range(len(d.layers)):
                ref = LayerRef(d.dnn_id, i)
                if indeg[ref] == 0:
                    ready.append(mk_entry(ref, now))

        parts, next_pid, changed = merge_free(parts, next_pid)
        if changed:
            trace.events.append(ScheduleEvent("merge", now, None, _snapshot(parts)))

        # assignment step
        assigned: list[tuple[TaskQueueEntry, Partition]] = []
        if ready:
            all_free = all(p.state == PART_FREE for p in parts)
            if not started_any:
                # the first-arriving layer takes the entire array
                top = sorted(ready, key=_entry_key)[0]
                assigned = [(top, parts[0])]
            elif all_free and len(ready) > 1:
                n = min(len(ready), cols)
                widths = partition_calculation(n, cols)
                new_parts: list[Partition] = []
                off = 0
                for wd in widths:
                    new_parts.append(Partition(next_pid, off, wd, PART_FREE))
                    next_pid += 1
                    off += wd
                if off < cols:
                    new_parts.append(Partition(next_pid, off, cols - off, PART_FREE))
                    next_pid += 1
                parts = new_parts
                trace.events.append(ScheduleEvent("repartition", now, None, _snapshot(parts)))
                assigned = task_assignment(ready, parts[:n])
            else:
                free_regions = [p for p in parts if p.state == PART_FREE]
                assigned = task_assignment(ready, free_regions)

        if assigned:
            started_any = True
            taken = {id(e) for e, _ in assigned}
            ready = [e for e in ready if id(e) not in taken]
            for e, p in assigned:
                p.state = PART_BUSY
                p.assignment = e.layer
            n_busy = sum(1 for p in parts if p.state == PART_BUSY)
            for e, p in assigned:
                n_active = n_busy if feed_model == FEED_INTERLEAVED else 1
                cstart = p.col_start if feed_model == FEED_INTERLEAVED else 0
                cycles, acts = _layer_run(w, e.layer, rows, p.col_width, feed_model,
                                          n_active, cstart, cols)
                running.append((now + cycles, p.part_id, e.layer))
                trace.events.append(ScheduleEvent("layer_start", now, e.layer, _snapshot(parts)))
                trace.layers.append(LayerRecord(e.layer.dnn_id, e.layer.layer_index,
                                                p.col_start, p.col_width, now,
                                                now + cycles, cycles, n_active, acts))
    return trace
