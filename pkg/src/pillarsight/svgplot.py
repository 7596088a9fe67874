"""Minimal self-contained SVG 1.1 line plots (no dependencies, no scripting).

Output is byte-stable: all coordinates are formatted with fixed precision,
and the document depends only on the data passed in.
"""

from __future__ import annotations

import math

_HEADER = (
    '<?xml version="1.0" encoding="UTF-8"?>\n'
    '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
    'width="{w}" height="{h}" viewBox="0 0 {w} {h}">\n'
)

PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]

WIDTH, HEIGHT = 720, 480
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 64, 16, 40, 56


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / target
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * step:
        ticks.append(round(t, 10))
        t += step
    return ticks


def line_plot(
    series: list[tuple[str, list[tuple[float, float]]]],
    title: str,
    x_label: str,
    y_label: str,
) -> str:
    """Render named polylines as an SVG document string.

    ``series`` is a list of (label, points); points with None y must be
    filtered out by the caller.  Each series becomes exactly one polyline.
    """
    xs = [p[0] for _, pts in series for p in pts]
    ys = [p[1] for _, pts in series for p in pts]
    if not xs:
        xs, ys = [0.0, 1.0], [0.0, 1.0]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    pad = 0.05 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad

    plot_w = WIDTH - MARGIN_L - MARGIN_R
    plot_h = HEIGHT - MARGIN_T - MARGIN_B

    def px(x: float) -> float:
        return MARGIN_L + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y: float) -> float:
        return MARGIN_T + (y_hi - y) / (y_hi - y_lo) * plot_h

    out = [_HEADER.format(w=WIDTH, h=HEIGHT)]
    out.append(f'<rect width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>\n')
    out.append(
        f'<text x="{WIDTH // 2}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="16">{title}</text>\n'
    )

    for t in _ticks(x_lo, x_hi):
        x = px(t)
        out.append(
            f'<line x1="{_fmt(x)}" y1="{MARGIN_T}" x2="{_fmt(x)}" '
            f'y2="{HEIGHT - MARGIN_B}" stroke="#dddddd" stroke-width="1"/>\n'
        )
        out.append(
            f'<text x="{_fmt(x)}" y="{HEIGHT - MARGIN_B + 18}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{t:g}</text>\n'
        )
    for t in _ticks(y_lo, y_hi):
        y = py(t)
        out.append(
            f'<line x1="{MARGIN_L}" y1="{_fmt(y)}" x2="{WIDTH - MARGIN_R}" '
            f'y2="{_fmt(y)}" stroke="#dddddd" stroke-width="1"/>\n'
        )
        out.append(
            f'<text x="{MARGIN_L - 6}" y="{_fmt(y + 4)}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{t:g}</text>\n'
        )
    out.append(
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{plot_w}" height="{plot_h}" '
        f'fill="none" stroke="#333333" stroke-width="1"/>\n'
    )
    out.append(
        f'<text x="{MARGIN_L + plot_w // 2}" y="{HEIGHT - 12}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13">{x_label}</text>\n'
    )
    out.append(
        f'<text x="16" y="{MARGIN_T + plot_h // 2}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13" '
        f'transform="rotate(-90 16 {MARGIN_T + plot_h // 2})">{y_label}</text>\n'
    )

    for i, (label, pts) in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        if pts:
            coords = " ".join(f"{_fmt(px(x))},{_fmt(py(y))}" for x, y in pts)
            out.append(
                f'<polyline points="{coords}" fill="none" stroke="{color}" '
                f'stroke-width="2"/>\n'
            )
        ly = MARGIN_T + 16 + 16 * i
        out.append(
            f'<line x1="{WIDTH - MARGIN_R - 150}" y1="{ly - 4}" '
            f'x2="{WIDTH - MARGIN_R - 126}" y2="{ly - 4}" stroke="{color}" '
            f'stroke-width="2"/>\n'
        )
        out.append(
            f'<text x="{WIDTH - MARGIN_R - 120}" y="{ly}" font-family="sans-serif" '
            f'font-size="11">{label}</text>\n'
        )

    out.append("</svg>\n")
    return "".join(out)


def scene_sketch(
    segments: list[tuple[str, tuple[float, float], tuple[float, float]]],
    title: str,
) -> str:
    """Sketch labeled line segments (scene diagrams for the reconstruction)."""
    xs = [c for _, a, b in segments for c in (a[0], b[0])]
    ys = [c for _, a, b in segments for c in (a[1], b[1])]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    span = max(x_hi - x_lo, y_hi - y_lo, 1.0)
    pad = 0.08 * span

    plot_w = WIDTH - MARGIN_L - MARGIN_R
    plot_h = HEIGHT - MARGIN_T - MARGIN_B
    scale = min(plot_w / (x_hi - x_lo + 2 * pad), plot_h / (y_hi - y_lo + 2 * pad))

    def px(x: float) -> float:
        return MARGIN_L + (x - x_lo + pad) * scale

    def py(y: float) -> float:
        return HEIGHT - MARGIN_B - (y - y_lo + pad) * scale

    out = [_HEADER.format(w=WIDTH, h=HEIGHT)]
    out.append(f'<rect width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>\n')
    out.append(
        f'<text x="{WIDTH // 2}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="16">{title}</text>\n'
    )
    for i, (label, a, b) in enumerate(segments):
        color = PALETTE[i % len(PALETTE)]
        out.append(
            f'<line x1="{_fmt(px(a[0]))}" y1="{_fmt(py(a[1]))}" '
            f'x2="{_fmt(px(b[0]))}" y2="{_fmt(py(b[1]))}" stroke="{color}" '
            f'stroke-width="2"/>\n'
        )
        ly = MARGIN_T + 16 + 16 * i
        out.append(
            f'<line x1="{WIDTH - MARGIN_R - 190}" y1="{ly - 4}" '
            f'x2="{WIDTH - MARGIN_R - 166}" y2="{ly - 4}" stroke="{color}" '
            f'stroke-width="2"/>\n'
        )
        out.append(
            f'<text x="{WIDTH - MARGIN_R - 160}" y="{ly}" font-family="sans-serif" '
            f'font-size="11">{label}</text>\n'
        )
    out.append("</svg>\n")
    return "".join(out)
