import json
import math
from collections.abc import Sequence
from typing import Optional, Union
from xml.sax.saxutils import escape

import numpy as np
from pydantic import BaseModel, Field  # pyright: ignore [reportUnknownVariableType]

from strauss.core.domain.errors import DataError
from strauss.core.domain.sweep import SweepTable

NS_SVG = "http://www.w3.org/2000/svg"
WIDTH, HEIGHT = 800, 500
# Plot area inside the viewBox: left, top, right, bottom
FRAME = (70, 30, 620, 450)
TICKS = 5
PALETTE = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"]


class PlotSpec(BaseModel):
    x: str = Field(description="Column on the horizontal axis")
    series: list[str] = Field(description="Columns drawn as polylines")
    scales: dict[str, float] = Field(default_factory=dict, description="Factor applied to a column before plotting")
    marker: Optional[float] = Field(default=None, description="x of a dotted vertical line")
    title: str = ""


def _num(v: float) -> str:
    return f"{v:.2f}"


def _props(**props: Union[str, float]) -> str:
    return " ".join(f'{k.replace("_", "-")}="{_num(v) if isinstance(v, float) else v}"' for k, v in props.items())


def _table_name(table: SweepTable, i: int) -> str:
    raw = table.metadata.get("d_mode")
    return str(json.loads(raw)) if raw else f"#{i + 1}"


def _bounds(values: Sequence[float]) -> tuple[float, float]:
    lo, hi = min(values), max(values)
    if hi - lo == 0:
        pad = abs(lo) * 0.05 or 1.0
        return lo - pad, hi + pad
    return lo, hi


def emit_svg(tables: Union[SweepTable, Sequence[SweepTable]], spec: PlotSpec) -> str:
    """A standalone line plot of spec.series against spec.x, one polyline per column and table.

    Rows with NaN in the plotted columns are skipped. Several tables are overlaid with one
    colour per (table, column) pair."""
    tables = [tables] if isinstance(tables, SweepTable) else list(tables)
    lines: list[tuple[str, list[tuple[float, float]]]] = []
    for i, table in enumerate(tables):
        x = table.column(spec.x)
        for name in spec.series:
            y = table.column(name) * spec.scales.get(name, 1.0)
            keep = np.isfinite(x) & np.isfinite(y)
            label = name if spec.scales.get(name, 1.0) == 1 else f"{name} × {spec.scales[name]:g}"
            if len(tables) > 1:
                label = f"{label} ({_table_name(table, i)})"
            lines.append((label, list(zip(x[keep].tolist(), y[keep].tolist()))))
    points = [p for _, pts in lines for p in pts]
    if not points:
        raise DataError("Nothing to plot: the tables have no complete rows", columns=[spec.x, *spec.series])

    marker = spec.marker if spec.marker is not None and math.isfinite(spec.marker) else None
    left, top, right, bottom = FRAME
    x_lo, x_hi = _bounds([p[0] for p in points] + ([marker] if marker is not None else []))
    y_lo, y_hi = _bounds([p[1] for p in points])

    def sx(v: float) -> float:
        return left + (v - x_lo) / (x_hi - x_lo) * (right - left)

    def sy(v: float) -> float:
        return bottom - (v - y_lo) / (y_hi - y_lo) * (bottom - top)

    out = [f'<svg xmlns="{NS_SVG}" viewBox="0 0 {WIDTH} {HEIGHT}" width="{WIDTH}" height="{HEIGHT}">']
    out.append(f'<rect {_props(x=0, y=0, width=WIDTH, height=HEIGHT, fill="white")}/>')
    if spec.title:
        out.append(f'<text {_props(x=float(WIDTH / 2), y=20.0, text_anchor="middle")}>{escape(spec.title)}</text>')

    # Axes with evenly spaced ticks
    out.append(f'<path d="M{left},{top} V{bottom} H{right}" fill="none" stroke="black"/>')
    for k in range(TICKS + 1):
        xv = x_lo + k * (x_hi - x_lo) / TICKS
        yv = y_lo + k * (y_hi - y_lo) / TICKS
        out.append(f'<line {_props(x1=sx(xv), y1=float(bottom), x2=sx(xv), y2=bottom + 5.0, stroke="black")}/>')
        out.append(f'<text {_props(x=sx(xv), y=bottom + 20.0, text_anchor="middle", font_size=11)}>{xv:.4g}</text>')
        out.append(f'<line {_props(x1=left - 5.0, y1=sy(yv), x2=float(left), y2=sy(yv), stroke="black")}/>')
        out.append(f'<text {_props(x=left - 8.0, y=sy(yv) + 4, text_anchor="end", font_size=11)}>{yv:.4g}</text>')
    x_label = _props(x=float((left + right) / 2), y=HEIGHT - 15.0, text_anchor="middle")
    out.append(f"<text {x_label}>{escape(spec.x)}</text>")

    for j, (label, pts) in enumerate(lines):
        colour = PALETTE[j % len(PALETTE)]
        if pts:
            coords = " ".join(f"{_num(sx(px))},{_num(sy(py))}" for px, py in pts)
            out.append(f'<polyline {_props(points=coords, fill="none", stroke=colour, stroke_width=1.5)}/>')
        ly = top + 10.0 + 20 * j
        out.append(f'<line {_props(x1=right + 20.0, y1=ly, x2=right + 45.0, y2=ly, stroke=colour, stroke_width=2)}/>')
        out.append(f'<text {_props(x=right + 50.0, y=ly + 4, font_size=12)}>{escape(label)}</text>')

    if marker is not None:
        mx = sx(marker)
        out.append(
            f'<line {_props(x1=mx, y1=float(top), x2=mx, y2=float(bottom), stroke="gray", stroke_dasharray="4 4")}/>',
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
