"""Top-level orchestration: analytical or functional runs and mode comparison.

Analytical fidelity prices every scheduled layer with the closed-form
timing and activity models. Functional fidelity replays every fold of the
schedule through the PE-array kernel with seeded synthetic integer
tensors, checks the numerical outputs against a direct matrix-product
oracle, and checks the measured cycles and event tallies against the
analytical trace; the two fidelities must agree exactly.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .energy import ActivityCounts, EnergyTable, energy_of, mpj_to_pj
from .lowering import lower, plan_folds
from .pearray import ArrayConfig, Partition, run_fold
from .scheduler import (
    MODE_BASELINE,
    MODE_PARTITIONED,
    LayerRecord,
    Trace,
    run_schedule,
)
from .timing import FEED_INDEPENDENT, FEED_INTERLEAVED
from .workload import Workload

FIDELITY_ANALYTICAL = "analytical"
FIDELITY_FUNCTIONAL = "functional"

# PE-event classes the functional kernel can measure directly; buffer-level
# classes (drain_rmw, dram_*) are charged analytically in both fidelities.
_MEASURED_CLASSES = ("mac_ops", "lr_writes", "pass_hops", "feed_reads",
                     "load_reads", "drain_writes")

SYNTH_VALUE_RANGE = 7  # synthetic tensor values lie in [-7, 7]


class FunctionalCapExceeded(Exception):
    pass


class WorkloadMismatch(Exception):
    pass


class FunctionalMismatch(AssertionError):
    """Functional replay disagreed with the analytical model."""


@dataclass(frozen=True)
class RunConfig:
    rows: int
    cols: int
    mode: str = MODE_PARTITIONED
    fidelity: str = FIDELITY_ANALYTICAL
    feed_model: str = FEED_INDEPENDENT
    seed: int = 0
    functional_cap: int = 64 * 64  # max rows*cols for functional fidelity


@dataclass
class RunResult:
    trace: Trace
    layer_energy_mpj: list[int]
    total_energy_mpj: int
    utilization: float


@dataclass
class ComparisonReport:
    baseline_makespan: int
    partitioned_makespan: int
    baseline_energy_mpj: int
    partitioned_energy_mpj: int
    baseline_utilization: float
    partitioned_utilization: float
    per_dnn_completion: dict[str, tuple[int, int]]
    time_improvement: float
    energy_improvement: float


def _layer_rng(seed: int, dnn_id: str, layer_index: int) -> np.random.Generator:
    digest = hashlib.sha256(f"{seed}:{dnn_id}:{layer_index}".encode()).digest()
    return np.random.default_rng(int.from_bytes(digest[:8], "little"))


def synthetic_tensors(seed: int, dnn_id: str, layer_index: int,
                      k: int, m: int, t: int) -> tuple[np.ndarray, np.ndarray]:
    """Seeded small-integer GEMM operands: weights [k, m] and inputs [t, k]."""
    rng = _layer_rng(seed, dnn_id, layer_index)
    w = rng.integers(-SYNTH_VALUE_RANGE, SYNTH_VALUE_RANGE + 1, (k, m), dtype=np.int64)
    x = rng.integers(-SYNTH_VALUE_RANGE, SYNTH_VALUE_RANGE + 1, (t, k), dtype=np.int64)
    return w, x


def _replay_layer(run: RunConfig, w: Workload, rec: LayerRecord) -> None:
    """Execute every fold of one scheduled layer on the PE array and check
    numerics, cycles, and event counts against the analytical record."""
    shape = None
    for d in w.dnns:
        if d.dnn_id == rec.dnn_id:
            shape = d.layers[rec.layer_index]
    assert shape is not None
    g = lower(shape)
    plan = plan_folds(g, run.rows, rec.col_width)
    wmat, xmat = synthetic_tensors(run.seed, rec.dnn_id, rec.layer_index, g.k, g.m, g.t)

    cfg = ArrayConfig(run.rows, run.cols, feed_model=run.feed_model)
    part = Partition(0, rec.col_start, rec.col_width)
    acc = np.zeros((g.t, g.m), dtype=np.int64)
    cycles = 0
    measured = dict.fromkeys(_MEASURED_CLASSES, 0)
    for f in plan.folds:
        wt = wmat[f.k_offset:f.k_offset + f.r_f, f.m_offset:f.m_offset + f.c_f]
        xt = xmat[:, f.k_offset:f.k_offset + f.r_f]
        res = run_fold(cfg, part, wt, xt, n_slots=rec.n_active, slot=0)
        acc[:, f.m_offset:f.m_offset + f.c_f] += res.outputs
        cycles += res.cycles_used
        for c in _MEASURED_CLASSES:
            measured[c] += res.counts[c]

    if not np.array_equal(acc, xmat @ wmat):
        raise FunctionalMismatch(
            f"{rec.dnn_id}/{rec.layer_index}: outputs differ from matmul oracle")
    if cycles != rec.cycles:
        raise FunctionalMismatch(
            f"{rec.dnn_id}/{rec.layer_index}: measured {cycles} cycles, modeled {rec.cycles}")
    for c in _MEASURED_CLASSES:
        want = getattr(rec.activities, c)
        if measured[c] != want:
            raise FunctionalMismatch(
                f"{rec.dnn_id}/{rec.layer_index}: {c} measured {measured[c]}, modeled {want}")


def execute(run: RunConfig, w: Workload, table: EnergyTable | None = None) -> RunResult:
    """Schedule the workload and, in functional fidelity, verify the whole
    schedule against the PE-array simulator before reporting."""
    if run.fidelity == FIDELITY_FUNCTIONAL and run.rows * run.cols > run.functional_cap:
        raise FunctionalCapExceeded(
            f"{run.rows}x{run.cols} exceeds functional cap {run.functional_cap}")
    if run.fidelity not in (FIDELITY_ANALYTICAL, FIDELITY_FUNCTIONAL):
        raise ValueError(f"unknown fidelity {run.fidelity!r}")
    table = table or EnergyTable.default()
    trace = run_schedule(w, run.rows, run.cols, run.mode, run.feed_model)
    if run.fidelity == FIDELITY_FUNCTIONAL:
        for rec in trace.layers:
            _replay_layer(run, w, rec)
    layer_energy = [energy_of(r.activities, table) for r in trace.layers]
    makespan = trace.makespan
    util = (trace.busy_pe_cycles() / (run.rows * run.cols * makespan)) if makespan else 0.0
    return RunResult(trace=trace, layer_energy_mpj=layer_energy,
                     total_energy_mpj=sum(layer_energy), utilization=util)


def compare(baseline: RunResult, partitioned: RunResult) -> ComparisonReport:
    """Comparison report; improvement ratios are (baseline - partitioned) / baseline."""
    if baseline.trace.fingerprint() != partitioned.trace.fingerprint():
        raise WorkloadMismatch("traces cover different workloads or arrays")
    b_mk, p_mk = baseline.trace.makespan, partitioned.trace.makespan
    b_en, p_en = baseline.total_energy_mpj, partitioned.total_energy_mpj
    b_done = baseline.trace.per_dnn_completion()
    p_done = partitioned.trace.per_dnn_completion()
    return ComparisonReport(
        baseline_makespan=b_mk,
        partitioned_makespan=p_mk,
        baseline_energy_mpj=b_en,
        partitioned_energy_mpj=p_en,
        baseline_utilization=baseline.utilization,
        partitioned_utilization=partitioned.utilization,
        per_dnn_completion={k: (b_done[k], p_done[k]) for k in sorted(b_done)},
        time_improvement=(b_mk - p_mk) / b_mk if b_mk else 0.0,
        energy_improvement=(b_en - p_en) / b_en if b_en else 0.0,
    )


# -- serialization ------------------------------------------------------


def trace_to_dict(result: RunResult, run: RunConfig) -> dict:
    t = result.trace
    return {
        "config": {
            "rows": run.rows, "cols": run.cols, "mode": run.mode,
            "fidelity": run.fidelity, "feed_model": run.feed_model,
            "seed": run.seed,
        },
        "makespan": t.makespan,
        "total_energy_pj": mpj_to_pj(result.total_energy_mpj),
        "utilization": result.utilization,
        "events": [
            {"kind": e.kind, "time": e.time,
             "layer": ({"dnn_id": e.layer.dnn_id, "layer_index": e.layer.layer_index}
                       if e.layer else None),
             "partitions": [list(p) for p in e.partitions]}
            for e in t.events
        ],
        "layers": [
            {"dnn_id": r.dnn_id, "layer_index": r.layer_index,
             "col_start": r.col_start, "col_width": r.col_width,
             "start": r.start, "end": r.end, "cycles": r.cycles,
             "activities": r.activities.as_dict(),
             "energy_pj": mpj_to_pj(result.layer_energy_mpj[i])}
            for i, r in enumerate(t.layers)
        ],
        "per_dnn_completion": t.per_dnn_completion(),
    }


def report_to_dict(rep: ComparisonReport) -> dict:
    return {
        "baseline": {"makespan": rep.baseline_makespan,
                     "total_energy_pj": mpj_to_pj(rep.baseline_energy_mpj),
                     "utilization": rep.baseline_utilization},
        "partitioned": {"makespan": rep.partitioned_makespan,
                        "total_energy_pj": mpj_to_pj(rep.partitioned_energy_mpj),
                        "utilization": rep.partitioned_utilization},
        "per_dnn_completion": {k: {"baseline": v[0], "partitioned": v[1]}
                               for k, v in rep.per_dnn_completion.items()},
        "improvement": {"time": rep.time_improvement,
                        "energy": rep.energy_improvement},
    }
