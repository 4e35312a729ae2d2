"""CSV tables and static SVG line charts for scenario results."""

from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Sequence, Union
from xml.sax.saxutils import escape

SCENARIO1_COLUMNS = ("distance_m", "mean_secrecy_rate", "mean_p_j_mw", "mean_alpha_beta", "lease_fraction")
SCENARIO2_COLUMNS = ("window_end_slot", "policy", "p_unreliable")

CHARTS = {
    # kind: (x column, y column, series column, x label, y label, title)
    "rate_vs_distance": ("distance_m", "mean_secrecy_rate", None,
                         "ED-ST distance (m)", "secrecy rate", "Primary secrecy rate vs eavesdropper distance"),
    "jamming_vs_distance": ("distance_m", "mean_p_j_mw", None,
                            "ED-ST distance (m)", "jamming power (mW)", "Secondary jamming power vs eavesdropper distance"),
    "alphabeta_vs_distance": ("distance_m", "mean_alpha_beta", None,
                              "ED-ST distance (m)", "alpha * beta", "Cooperation phase vs eavesdropper distance"),
    "unreliable_vs_time": ("window_end_slot", "p_unreliable", "policy",
                           "time slot", "P(select unreliable SU)", "Probability of selecting unreliable nodes over time"),
}
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")

Row = dict


class SchemaError(ValueError):
    pass


def format_value(v) -> str:
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return f"{v:.9g}"
    return str(v)


def emit_csv(rows: Sequence[Row], path: Union[str, Path], columns: Sequence[str] = None) -> None:
    if not rows:
        raise SchemaError("refusing to write an empty table")
    columns = list(columns or rows[0].keys())
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([format_value(r[c]) for c in columns])


def read_csv(path: Union[str, Path]) -> list[Row]:
    """Read a table written by :func:`emit_csv`; numeric cells become floats."""
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.DictReader(fh))
    out = []
    for r in rows:
        conv = {}
        for k, v in r.items():
            try:
                conv[k] = float(v)
            except ValueError:
                conv[k] = v
        out.append(conv)
    return out


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi == lo:
        return [lo]
    return [lo + (hi - lo) * k / (n - 1) for k in range(n)]


def _bounds(values: list[float]) -> tuple[float, float]:
    finite = [v for v in values if math.isfinite(v)]
    if not finite:
        return 0.0, 1.0
    lo, hi = min(finite), max(finite)
    if lo == hi:
        pad = abs(lo) * 0.1 or 1.0
        return lo - pad, hi + pad
    return lo, hi


def render_svg(rows: Sequence[Row], kind: str, width: int = 640, height: int = 420) -> str:
    if kind not in CHARTS:
        raise SchemaError(f"unknown chart kind {kind!r}")
    xcol, ycol, scol, xlabel, ylabel, title = CHARTS[kind]
    need = [c for c in (xcol, ycol, scol) if c]
    if not rows:
        raise SchemaError("empty table")
    missing = [c for c in need if c not in rows[0]]
    if missing:
        raise SchemaError(f"{kind} needs columns {missing}")

    series: dict[str, list[tuple[float, float]]] = {}
    for r in rows:
        name = str(r[scol]) if scol else ycol
        series.setdefault(name, []).append((float(r[xcol]), float(r[ycol])))

    xs = [x for pts in series.values() for x, _ in pts]
    ys = [y for pts in series.values() for _, y in pts]
    x0, x1 = _bounds(xs)
    y0, y1 = _bounds(ys)
    left, right, top, bottom = 80, 150, 40, 60
    pw, ph = width - left - right, height - top - bottom

    def sx(x):
        return left + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return top + ph - (y - y0) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{left + pw / 2:.2f}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="black"/>',
    ]
    for t in _ticks(x0, x1):
        out.append(f'<line x1="{sx(t):.2f}" y1="{top + ph}" x2="{sx(t):.2f}" y2="{top + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{sx(t):.2f}" y="{top + ph + 18}" text-anchor="middle">{t:.4g}</text>')
    for t in _ticks(y0, y1):
        out.append(f'<line x1="{left - 5}" y1="{sy(t):.2f}" x2="{left}" y2="{sy(t):.2f}" stroke="black"/>')
        out.append(f'<text x="{left - 8}" y="{sy(t) + 4:.2f}" text-anchor="end">{t:.4g}</text>')
    out.append(f'<text x="{left + pw / 2:.2f}" y="{height - 15}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(
        f'<text x="20" y="{top + ph / 2:.2f}" text-anchor="middle" '
        f'transform="rotate(-90 20 {top + ph / 2:.2f})">{escape(ylabel)}</text>'
    )
    for k, (name, pts) in enumerate(series.items()):
        color = COLORS[k % len(COLORS)]
        pts = [(x, y) for x, y in pts if math.isfinite(x) and math.isfinite(y)]
        coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in pts)
        out.append(f'<polyline class="series" data-series="{escape(name)}" fill="none" '
                   f'stroke="{color}" stroke-width="2" points="{coords}"/>')
        for x, y in pts:
            out.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="3" fill="{color}"/>')
        ly = top + 10 + 18 * k
        out.append(f'<line x1="{left + pw + 15}" y1="{ly}" x2="{left + pw + 35}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{left + pw + 40}" y="{ly + 4}">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_chart(rows: Sequence[Row], kind: str, path: Union[str, Path]) -> None:
    Path(path).write_text(render_svg(rows, kind), encoding="utf-8")
