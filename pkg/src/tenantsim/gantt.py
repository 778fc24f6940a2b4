"""Static Gantt-style SVG rendering of a schedule trace."""

from __future__ import annotations

from xml.sax.saxutils import escape

from .scheduler import Trace

# deterministic palette, cycled by DNN order of first appearance
_PALETTE = ["#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#b07aa1",
            "#76b7b2", "#edc948", "#ff9da7", "#9c755f", "#bab0ac"]


class EmptyTrace(Exception):
    pass


def render_gantt(trace: Trace, px_per_cycle: float | None = None,
                 px_per_col: int = 14) -> str:
    """One horizontal band per partition column range over time; layer
    blocks labeled dnn_id/layer_index. Deterministic for a given trace."""
    if not trace.layers:
        raise EmptyTrace("trace contains no executed layers")
    makespan = trace.makespan
    if px_per_cycle is None:
        px_per_cycle = max(720.0 / makespan, 0.02)
    margin_l, margin_t = 60, 30
    width = margin_l + int(makespan * px_per_cycle) + 20
    height = margin_t + trace.cols * px_per_col + 40

    colors: dict[str, str] = {}
    for r in trace.layers:
        if r.dnn_id not in colors:
            colors[r.dnn_id] = _PALETTE[len(colors) % len(_PALETTE)]

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
        f'<text x="{margin_l}" y="16" font-family="monospace" font-size="12">'
        f'{escape(trace.mode)} schedule, {trace.rows}x{trace.cols} array, '
        f'makespan {makespan} cycles</text>',
    ]
    for r in trace.layers:
        x = margin_l + r.start * px_per_cycle
        w = max(r.cycles * px_per_cycle, 1.0)
        y = margin_t + r.col_start * px_per_col
        h = r.col_width * px_per_col
        label = f"{r.dnn_id}/{r.layer_index}"
        parts.append(
            f'<rect x="{x:.2f}" y="{y}" width="{w:.2f}" height="{h}" '
            f'fill="{colors[r.dnn_id]}" stroke="#333333" stroke-width="0.5"/>')
        parts.append(
            f'<text x="{x + 2:.2f}" y="{y + min(h, 14) - 3}" font-family="monospace" '
            f'font-size="10" fill="#000000">{escape(label)}</text>')
    # axis
    axis_y = margin_t + trace.cols * px_per_col + 16
    parts.append(f'<text x="{margin_l}" y="{axis_y}" font-family="monospace" '
                 f'font-size="10">0</text>')
    parts.append(f'<text x="{margin_l + makespan * px_per_cycle:.2f}" y="{axis_y}" '
                 f'font-family="monospace" font-size="10" text-anchor="end">{makespan}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
