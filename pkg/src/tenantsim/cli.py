"""Command-line front end: run, compare, validate, gantt.

Exit codes: 0 success, 1 validation failure, 2 usage error. Diagnostics go
to stderr, data to the requested files or stdout. Set TENANTSIM_LOG to a
logging level name (e.g. DEBUG) for verbosity.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys

from .energy import EnergyTable, mpj_to_pj
from .engine import (
    FIDELITY_ANALYTICAL,
    FIDELITY_FUNCTIONAL,
    RunConfig,
    RunResult,
    compare,
    execute,
    report_to_dict,
    trace_to_dict,
)
from .gantt import render_gantt
from .scheduler import MODE_BASELINE, MODE_PARTITIONED
from .timing import FEED_INDEPENDENT, FEED_INTERLEAVED
from .workload import ParseError, WorkloadValidationError, load_workload

log = logging.getLogger("tenantsim")


def _setup_logging() -> None:
    level = os.environ.get("TENANTSIM_LOG", "WARNING").upper()
    logging.basicConfig(stream=sys.stderr, level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--workload", required=True, help="workload JSON file")
    p.add_argument("--rows", type=int, default=128)
    p.add_argument("--cols", type=int, default=128)
    p.add_argument("--fidelity", choices=[FIDELITY_ANALYTICAL, FIDELITY_FUNCTIONAL],
                   default=FIDELITY_ANALYTICAL)
    p.add_argument("--feed-model", choices=[FEED_INDEPENDENT, FEED_INTERLEAVED],
                   default=FEED_INDEPENDENT)
    p.add_argument("--energy-table", help="energy table JSON file")
    p.add_argument("--seed", type=int, default=0)


def _load_inputs(args) -> tuple:
    w = load_workload(args.workload)
    table = EnergyTable.load(args.energy_table) if args.energy_table else EnergyTable.default()
    return w, table


def _write_json(path: str | None, doc: dict) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _write_layer_csv(path: str, result: RunResult) -> None:
    t = result.trace
    with open(path, "w", newline="", encoding="utf-8") as f:
        wr = csv.writer(f)
        wr.writerow(["dnn_id", "layer_index", "col_start", "col_width", "start",
                     "end", "cycles", "energy_pj"])
        for i, r in enumerate(t.layers):
            wr.writerow([r.dnn_id, r.layer_index, r.col_start, r.col_width,
                         r.start, r.end, r.cycles,
                         mpj_to_pj(result.layer_energy_mpj[i])])


def _cmd_run(args) -> int:
    w, table = _load_inputs(args)
    run = RunConfig(rows=args.rows, cols=args.cols, mode=args.mode,
                    fidelity=args.fidelity, feed_model=args.feed_model, seed=args.seed)
    result = execute(run, w, table)
    _write_json(args.out, trace_to_dict(result, run))
    if args.report:
        _write_layer_csv(args.report, result)
    if args.gantt:
        with open(args.gantt, "w", encoding="utf-8") as f:
            f.write(render_gantt(result.trace))
    log.info("makespan %d cycles, energy %.3f pJ", result.trace.makespan,
             mpj_to_pj(result.total_energy_mpj))
    return 0


def _cmd_compare(args) -> int:
    w, table = _load_inputs(args)
    results = {}
    for mode in (MODE_BASELINE, MODE_PARTITIONED):
        run = RunConfig(rows=args.rows, cols=args.cols, mode=mode,
                        fidelity=args.fidelity, feed_model=args.feed_model,
                        seed=args.seed)
        results[mode] = execute(run, w, table)
    rep = compare(results[MODE_BASELINE], results[MODE_PARTITIONED])
    _write_json(args.report, report_to_dict(rep))
    return 0


def _cmd_validate(args) -> int:
    load_workload(args.workload)
    print(f"{args.workload}: OK")
    return 0


def _cmd_gantt(args) -> int:
    with open(args.trace, "r", encoding="utf-8") as f:
        doc = json.load(f)
    # rebuild the minimal trace the renderer needs
    from .energy import ActivityCounts
    from .scheduler import LayerRecord, Trace
    cfg = doc["config"]
    trace = Trace(mode=cfg["mode"], rows=cfg["rows"], cols=cfg["cols"],
                  feed_model=cfg["feed_model"])
    for r in doc["layers"]:
        trace.layers.append(LayerRecord(r["dnn_id"], r["layer_index"], r["col_start"],
                                        r["col_width"], r["start"], r["end"],
                                        r["cycles"], 1, ActivityCounts()))
    with open(args.out, "w", encoding="utf-8") as f:
        f.write(render_gantt(trace))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tenantsim",
                                description="Multi-tenant systolic-array simulator")
    sub = p.add_subparsers(dest="command", required=True)

    pr = sub.add_parser("run", help="simulate one workload in one mode")
    _add_run_flags(pr)
    pr.add_argument("--mode", choices=[MODE_PARTITIONED, MODE_BASELINE],
                    default=MODE_PARTITIONED)
    pr.add_argument("--out", help="trace JSON output path (default stdout)")
    pr.add_argument("--report", help="per-layer CSV summary path")
    pr.add_argument("--gantt", help="schedule SVG output path")
    pr.set_defaults(fn=_cmd_run)

    pc = sub.add_parser("compare", help="run baseline and partitioned, report improvements")
    _add_run_flags(pc)
    pc.add_argument("--report", help="comparison JSON output path (default stdout)")
    pc.set_defaults(fn=_cmd_compare)

    pv = sub.add_parser("validate", help="validate a workload file")
    pv.add_argument("--workload", required=True)
    pv.set_defaults(fn=_cmd_validate)

    pg = sub.add_parser("gantt", help="render an SVG from a trace JSON file")
    pg.add_argument("--trace", required=True)
    pg.add_argument("--out", required=True)
    pg.set_defaults(fn=_cmd_gantt)
    return p


def main(argv: list[str] | None = None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ParseError, WorkloadValidationError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
