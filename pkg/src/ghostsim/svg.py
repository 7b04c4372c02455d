"""Bare-bones SVG line plots (no plotting dependency)."""
from __future__ import annotations

import math

import numpy as np

W, H = 640, 400
ML, MR, MT, MB = 70, 20, 30, 50


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=raw)
    start = math.ceil(lo / step) * step
    return [start + i * step for i in range(int((hi - start) / step + 1e-9) + 1)]


def line_plot(series: dict, title: str = "", xlabel: str = "", ylabel: str = "") -> str:
    """``series`` maps a label to an (x, y) pair of equal-length arrays."""
    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"]
    xs = np.concatenate([np.asarray(x, float) for x, _ in series.values()])
    ys = np.concatenate([np.asarray(y, float) for _, y in series.values()])
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = 0.0 if ys.min() >= 0 else float(ys.min()), float(ys.max()) or 1.0

    def px(x):
        return ML + (x - x0) / (x1 - x0 or 1) * (W - ML - MR)

    def py(y):
        return H - MB - (y - y0) / (y1 - y0 or 1) * (H - MT - MB)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
           f'font-family="sans-serif" font-size="11">',
           f'<rect width="{W}" height="{H}" fill="white"/>',
           f'<line x1="{ML}" y1="{H - MB}" x2="{W - MR}" y2="{H - MB}" stroke="black"/>',
           f'<line x1="{ML}" y1="{MT}" x2="{ML}" y2="{H - MB}" stroke="black"/>']
    for t in _ticks(x0, x1):
        out.append(f'<line x1="{px(t):.1f}" y1="{H - MB}" x2="{px(t):.1f}" y2="{H - MB + 5}" stroke="black"/>')
        out.append(f'<text x="{px(t):.1f}" y="{H - MB + 18}" text-anchor="middle">{t:.3g}</text>')
    for t in _ticks(y0, y1):
        out.append(f'<line x1="{ML - 5}" y1="{py(t):.1f}" x2="{ML}" y2="{py(t):.1f}" stroke="black"/>')
        out.append(f'<text x="{ML - 8}" y="{py(t) + 4:.1f}" text-anchor="end">{t:.3g}</text>')
    for i, (label, (x, y)) in enumerate(series.items()):
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x, y))
        c = colors[i % len(colors)]
        out.append(f'<polyline fill="none" stroke="{c}" stroke-width="1.2" points="{pts}"/>')
        out.append(f'<text x="{W - MR - 5}" y="{MT + 14 * (i + 1)}" text-anchor="end" fill="{c}">{label}</text>')
    out.append(f'<text x="{W / 2}" y="{MT - 10}" text-anchor="middle" font-size="13">{title}</text>')
    out.append(f'<text x="{W / 2}" y="{H - 12}" text-anchor="middle">{xlabel}</text>')
    out.append(f'<text x="16" y="{H / 2}" text-anchor="middle" '
               f'transform="rotate(-90 16 {H / 2})">{ylabel}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
