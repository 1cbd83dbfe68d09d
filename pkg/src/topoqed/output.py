"""Deterministic CSV, JSON and SVG emission.

CSV is the canonical data format; headers carry explicit units.  Floats are
rendered with ``%.12g`` so repeated runs with identical inputs produce
byte-identical files.  The SVG plot is a dependency-free polyline with axis
ticks, adequate for eyeballing a fidelity curve.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Iterable, Sequence

__all__ = ["write_csv", "write_json", "write_svg_plot"]


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    Path(path).write_text("\n".join(lines) + "\n")


def write_json(path: Path, payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _ticks(lo: float, hi: float, n: int = 6) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / max(n - 1, 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    step = min(s for s in (mag, 2 * mag, 2.5 * mag, 5 * mag, 10 * mag) if s >= raw)
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * step:
        ticks.append(round(t, 12))
        t += step
    return ticks or [lo]


def write_svg_plot(
    path: Path,
    x: Sequence[float],
    y: Sequence[float],
    xlabel: str,
    ylabel: str,
    title: str = "",
    width: int = 640,
    height: int = 440,
) -> None:
    """Polyline plot of y(x) with tick marks and axis labels."""
    margin_l, margin_r, margin_t, margin_b = 70, 20, 36, 56
    pw = width - margin_l - margin_r
    ph = height - margin_t - margin_b
    x = [float(v) for v in x]
    y = [float(v) for v in y]
    x_lo, x_hi = min(x), max(x)
    y_lo, y_hi = min(y), max(y)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    pad = 0.05 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad

    def sx(v: float) -> float:
        return margin_l + pw * (v - x_lo) / (x_hi - x_lo)

    def sy(v: float) -> float:
        return margin_t + ph * (1.0 - (v - y_lo) / (y_hi - y_lo))

    points = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(x, y))
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{margin_l}" y="{margin_t}" width="{pw}" height="{ph}" '
        'fill="none" stroke="black" stroke-width="1"/>',
    ]
    for t in _ticks(x_lo, x_hi):
        px = sx(t)
        parts.append(
            f'<line x1="{px:.2f}" y1="{margin_t + ph}" x2="{px:.2f}" '
            f'y2="{margin_t + ph + 5}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{px:.2f}" y="{margin_t + ph + 20}" font-size="12" '
            f'text-anchor="middle">{_fmt(float(t))}</text>'
        )
    for t in _ticks(y_lo, y_hi):
        py = sy(t)
        parts.append(
            f'<line x1="{margin_l - 5}" y1="{py:.2f}" x2="{margin_l}" '
            f'y2="{py:.2f}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{margin_l - 8}" y="{py + 4:.2f}" font-size="12" '
            f'text-anchor="end">{_fmt(float(t))}</text>'
        )
    parts.append(
        f'<polyline points="{points}" fill="none" stroke="#1f77b4" stroke-width="1.5"/>'
    )
    parts.append(
        f'<text x="{margin_l + pw / 2:.1f}" y="{height - 14}" font-size="14" '
        f'text-anchor="middle">{xlabel}</text>'
    )
    parts.append(
        f'<text x="18" y="{margin_t + ph / 2:.1f}" font-size="14" text-anchor="middle" '
        f'transform="rotate(-90 18 {margin_t + ph / 2:.1f})">{ylabel}</text>'
    )
    if title:
        parts.append(
            f'<text x="{margin_l + pw / 2:.1f}" y="22" font-size="14" '
            f'text-anchor="middle">{title}</text>'
        )
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")
