# src/hgspec/svg.py
from __future__ import annotations

from html import escape
from typing import Sequence

from .. import config

MARGIN = 50
COLORS = {"re": "#1f4e9c", "im": "#c0392b", "atom": "#2e7d32", "axis": "#333333"}


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _polyline(xs: Sequence[float], ys: Sequence[float], color: str, dashed: bool = False) -> str:
    pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in zip(xs, ys))
    dash = ' stroke-dasharray="6,4"' if dashed else ""
    return f'<polyline fill="none" stroke="{color}" stroke-width="1.5"{dash} points="{pts}"/>'


def render_measure_svg(
    ts: Sequence[float],
    re_density: Sequence[float],
    im_density: Sequence[float] | None,
    atoms: Sequence[tuple[float, float, str]],
    *,
    title: str,
    width: int = config.SVG_WIDTH,
    height: int = config.SVG_HEIGHT,
) -> str:
    """
    Density curve(s) over [-1, 1] plus atoms as stems labelled with their weight.

    atoms are (location, weight, label). Stems use their own scale: weight 1
    reaches the top of the plot area.
    """
    plot_w = width - 2 * MARGIN
    plot_h = height - 2 * MARGIN
    values = list(re_density) + (list(im_density) if im_density else [])
    y_lo = min([0.0] + values)
    y_hi = max([0.0] + values)
    if y_hi - y_lo <= 0:
        y_hi = y_lo + 1.0
    pad = 0.05 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - (pad if y_lo < 0 else 0.0), y_hi + pad

    def sx(t: float) -> float:
        return MARGIN + (t + 1.0) / 2.0 * plot_w

    def sy(v: float) -> float:
        return MARGIN + (y_hi - v) / (y_hi - y_lo) * plot_h

    base_y = sy(0.0)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.0f}" y="{MARGIN / 2:.0f}" text-anchor="middle" font-family="sans-serif" '
        f'font-size="14">{escape(title)}</text>',
        f'<line x1="{_fmt(sx(-1.0))}" y1="{_fmt(base_y)}" x2="{_fmt(sx(1.0))}" y2="{_fmt(base_y)}" '
        f'stroke="{COLORS["axis"]}" stroke-width="1"/>',
    ]
    for tick in (-1.0, -0.5, 0.0, 0.5, 1.0):
        x = sx(tick)
        parts.append(f'<line x1="{_fmt(x)}" y1="{_fmt(base_y)}" x2="{_fmt(x)}" y2="{_fmt(base_y + 5)}" stroke="{COLORS["axis"]}"/>')
        parts.append(
            f'<text x="{_fmt(x)}" y="{_fmt(base_y + 18)}" text-anchor="middle" font-family="sans-serif" '
            f'font-size="11">{tick:g}</text>'
        )

    if len(ts) > 1:
        xs = [sx(t) for t in ts]
        parts.append(_polyline(xs, [sy(v) for v in re_density], COLORS["re"]))
        if im_density and any(v != 0 for v in im_density):
            parts.append(_polyline(xs, [sy(v) for v in im_density], COLORS["im"], dashed=True))

    for loc, weight, label in atoms:
        x = sx(loc)
        top = base_y - max(min(weight, 1.0), -1.0) * (base_y - MARGIN)
        parts.append(
            f'<line x1="{_fmt(x)}" y1="{_fmt(base_y)}" x2="{_fmt(x)}" y2="{_fmt(top)}" '
            f'stroke="{COLORS["atom"]}" stroke-width="2"/>'
        )
        parts.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(top)}" r="4" fill="{COLORS["atom"]}"/>')
        parts.append(
            f'<text x="{_fmt(x)}" y="{_fmt(top - 8)}" text-anchor="middle" font-family="sans-serif" '
            f'font-size="11">{escape(label)}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
