"""Multi-DNN workload model: layer shapes, per-tenant DAGs, and file I/O.

A workload is a pool of DNNs, each a DAG of convolution/FC layers with an
arrival time. Layer shapes follow the nine-field convolution tuple
(M, N, C, R, S, H, W, P, Q) with unit stride and no padding, so
P = H - R + 1 and Q = W - S + 1. Fully-connected layers are encoded as
convolutions with R = H, S = W, P = Q = 1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import IO, Union

# MAC-count accumulator width; workloads whose priority metric exceeds this
# are rejected at load time.
OPR_COUNT_MAX = 2**63 - 1

_LAYER_FIELDS = ("M", "N", "C", "R", "S", "H", "W", "P", "Q")


@dataclass(frozen=True)
class LayerShape:
    """The nine shape parameters of one convolution (or FC) layer."""

    M: int  # output channels
    N: int  # batch size
    C: int  # input channels
    R: int  # filter height
    S: int  # filter width
    H: int  # input height
    W: int  # input width
    P: int  # output height
    Q: int  # output width


@dataclass(frozen=True)
class LayerRef:
    """Reference to one layer of one DNN in a workload."""

    dnn_id: str
    layer_index: int


@dataclass
class DnnGraph:
    """One tenant: a DAG of layers with an arrival time (cycles)."""

    dnn_id: str
    arrival_time: int
    layers: list[LayerShape]
    edges: list[tuple[int, int]]
    estimated_exec: int | None = None


@dataclass
class Workload:
    """A pool of DNNs sharing one accelerator."""

    dnns: list[DnnGraph] = field(default_factory=list)


class ParseError(Exception):
    """Raised when a workload file is structurally malformed."""


@dataclass(frozen=True)
class ValidationIssue:
    code: str
    message: str

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


class WorkloadValidationError(Exception):
    """Raised when a workload violates model invariants; carries all issues."""

    def __init__(self, issues: list[ValidationIssue]):
        self.issues = issues
        super().__init__("; ".join(str(i) for i in issues))


def opr_count(layer: LayerShape) -> int:
    """MAC-count priority metric for one layer: M*N*C*R*S*H*W.

    Note the H*W factors (the IFMap extent), which overcount the MACs a
    valid convolution actually executes (that would use P*Q). This value
    is used only to prioritize layers, never to count executed work.
    """
    return layer.M * layer.N * layer.C * layer.R * layer.S * layer.H * layer.W


def chain_edges(n_layers: int) -> list[tuple[int, int]]:
    """Implied linear-chain precedence l0 -> l1 -> ... for a DNN."""
    return [(i, i + 1) for i in range(n_layers - 1)]


def _check_layer(dnn_id: str, idx: int, l: LayerShape, issues: list[ValidationIssue]) -> None:
    where = f"dnn {dnn_id!r} layer {idx}"
    for name in _LAYER_FIELDS:
        v = getattr(l, name)
        if not isinstance(v, int) or v < 1:
            issues.append(ValidationIssue("BadShapeField", f"{where}: {name}={v!r} must be an integer >= 1"))
            return
    if l.R > l.H or l.S > l.W:
        issues.append(ValidationIssue("ShapeInconsistent", f"{where}: filter ({l.R}x{l.S}) exceeds input ({l.H}x{l.W})"))
        return
    if l.P != l.H - l.R + 1:
        issues.append(ValidationIssue(
            "ShapeInconsistent", f"{where}: P={l.P}, expected H-R+1={l.H - l.R + 1}"))
    if l.Q != l.W - l.S + 1:
        issues.append(ValidationIssue(
            "ShapeInconsistent", f"{where}: Q={l.Q}, expected W-S+1={l.W - l.S + 1}"))
    if opr_count(l) > OPR_COUNT_MAX:
        issues.append(ValidationIssue("OprOverflow", f"{where}: MAC priority metric exceeds {OPR_COUNT_MAX}"))


def _has_cycle(n: int, edges: list[tuple[int, int]]) -> bool:
    adj: list[list[int]] = [[] for _ in range(n)]
    indeg = [0] * n
    for a, b in edges:
        adj[a].append(b)
        indeg[b] += 1
    stack = [i for i in range(n) if indeg[i] == 0]
    seen = 0
    while stack:
        u = stack.pop()
        seen += 1
        for v in adj[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                stack.append(v)
    return seen != n


def validate_workload(w: Workload) -> Workload:
    """Check every model invariant; raise with the full issue list on failure.

    Idempotent: a workload that validates once validates again unchanged.
    """
    issues: list[ValidationIssue] = []
    if not w.dnns:
        issues.append(ValidationIssue("EmptyWorkload", "workload contains no DNNs"))
    seen_ids: set[str] = set()
    for d in w.dnns:
        if d.dnn_id in seen_ids:
            issues.append(ValidationIssue("DuplicateDnnId", f"dnn id {d.dnn_id!r} appears more than once"))
        seen_ids.add(d.dnn_id)
        if d.arrival_time < 0:
            issues.append(ValidationIssue("BadArrivalTime", f"dnn {d.dnn_id!r}: arrival_time must be >= 0"))
        if not d.layers:
            issues.append(ValidationIssue("EmptyDnn", f"dnn {d.dnn_id!r} has no layers"))
            continue
        for i, l in enumerate(d.layers):
            _check_layer(d.dnn_id, i, l, issues)
        n = len(d.layers)
        bad_edge = False
        for a, b in d.edges:
            if not (0 <= a < n and 0 <= b < n):
                issues.append(ValidationIssue("BadEdge", f"dnn {d.dnn_id!r}: edge ({a},{b}) out of range"))
                bad_edge = True
        if not bad_edge and _has_cycle(n, d.edges):
            issues.append(ValidationIssue("CycleInPrecedence", f"dnn {d.dnn_id!r}: precedence edges form a cycle"))
    if issues:
        raise WorkloadValidationError(issues)
    return w


def _parse_layer(obj: dict, dnn_id: str, idx: int) -> LayerShape:
    if not isinstance(obj, dict):
        raise ParseError(f"dnn {dnn_id!r} layer {idx}: expected an object")
    unknown = set(obj) - set(_LAYER_FIELDS)
    if unknown:
        raise ParseError(f"dnn {dnn_id!r} layer {idx}: unknown field {sorted(unknown)[0]!r}")
    vals = {}
    for name in _LAYER_FIELDS:
        if name in ("P", "Q"):
            continue
        if name not in obj:
            raise ParseError(f"dnn {dnn_id!r} layer {idx}: missing field {name!r}")
        vals[name] = obj[name]
    for name, v in vals.items():
        if not isinstance(v, int):
            raise ParseError(f"dnn {dnn_id!r} layer {idx}: field {name!r} must be an integer")
    vals["P"] = obj.get("P", vals["H"] - vals["R"] + 1)
    vals["Q"] = obj.get("Q", vals["W"] - vals["S"] + 1)
    return LayerShape(**vals)


def load_workload(source: Union[str, "IO[str]"]) -> Workload:
    """Parse a workload JSON file (path or open stream) and validate it."""
    if hasattr(source, "read"):
        text = source.read()
        name = getattr(source, "name", "<stream>")
    else:
        with open(source, "r", encoding="utf-8") as f:
            text = f.read()
        name = str(source)
    if not text.strip():
        raise ParseError(f"{name}: empty workload file")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{name}: invalid JSON at line {e.lineno}: {e.msg}") from e
    if not isinstance(doc, dict) or "dnns" not in doc:
        raise ParseError(f"{name}: top level must be an object with a 'dnns' list")
    if not isinstance(doc["dnns"], list):
        raise ParseError(f"{name}: 'dnns' must be a list")
    dnns = []
    for di, dobj in enumerate(doc["dnns"]):
        if not isinstance(dobj, dict):
            raise ParseError(f"{name}: dnns[{di}] must be an object")
        unknown = set(dobj) - {"dnn_id", "arrival_time", "layers", "edges", "estimated_exec"}
        if unknown:
            raise ParseError(f"{name}: dnns[{di}]: unknown field {sorted(unknown)[0]!r}")
        for req in ("dnn_id", "arrival_time", "layers"):
            if req not in dobj:
                raise ParseError(f"{name}: dnns[{di}]: missing field {req!r}")
        dnn_id = dobj["dnn_id"]
        if not isinstance(dnn_id, str):
            raise ParseError(f"{name}: dnns[{di}]: 'dnn_id' must be a string")
        if not isinstance(dobj["arrival_time"], int):
            raise ParseError(f"{name}: dnn {dnn_id!r}: 'arrival_time' must be an integer")
        if not isinstance(dobj["layers"], list):
            raise ParseError(f"{name}: dnn {dnn_id!r}: 'layers' must be a list")
        layers = [_parse_layer(lobj, dnn_id, i) for i, lobj in enumerate(dobj["layers"])]
        if "edges" in dobj:
            raw = dobj["edges"]
            if not isinstance(raw, list):
                raise ParseError(f"{name}: dnn {dnn_id!r}: 'edges' must be a list")
            edges = []
            for e in raw:
                if not (isinstance(e, list) and len(e) == 2 and all(isinstance(x, int) for x in e)):
                    raise ParseError(f"{name}: dnn {dnn_id!r}: each edge must be a 2-element integer array")
                edges.append((e[0], e[1]))
        else:
            edges = chain_edges(len(layers))
        est = dobj.get("estimated_exec")
        if est is not None and not isinstance(est, int):
            raise ParseError(f"{name}: dnn {dnn_id!r}: 'estimated_exec' must be an integer")
        dnns.append(DnnGraph(dnn_id=dnn_id, arrival_time=dobj["arrival_time"],
                             layers=layers, edges=edges, estimated_exec=est))
    return validate_workload(Workload(dnns=dnns))


def workload_to_dict(w: Workload) -> dict:
    return {
        "dnns": [
            {
                "dnn_id": d.dnn_id,
                "arrival_time": d.arrival_time,
                "layers": [{k: getattr(l, k) for k in _LAYER_FIELDS} for l in d.layers],
                "edges": [list(e) for e in d.edges],
                **({"estimated_exec": d.estimated_exec} if d.estimated_exec is not None else {}),
            }
            for d in w.dnns
        ]
    }


def save_workload(w: Workload, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(workload_to_dict(w), f, indent=2, sort_keys=True)
        f.write("\n")
