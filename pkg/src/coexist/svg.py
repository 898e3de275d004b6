"""Minimal SVG line and scatter plots (no plotting dependency)."""

import math
from dataclasses import dataclass
from html import escape
from pathlib import Path
from typing import List, Sequence

import numpy as np

__all__ = ["Series", "render_svg", "write_svg"]

_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
           "#e377c2", "#7f7f7f"]
_W, _H = 640, 420
_L, _R, _T, _B = 70, 150, 40, 55


@dataclass
class Series:
    label: str
    x: Sequence[float]
    y: Sequence[float]
    kind: str = "line"  # "line" or "scatter"


def _nice_ticks(lo: float, hi: float, n: int = 6) -> List[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / max(n - 1, 1)
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw)
    start = math.floor(lo / step) * step
    ticks = []
    t = start
    while t <= hi + 1e-9 * step:
        if t >= lo - 1e-9 * step:
            ticks.append(round(t, 12))
        t += step
    return ticks


def render_svg(series: Sequence[Series], title: str = "", xlabel: str = "",
               ylabel: str = "") -> str:
    """SVG document for ``series``; NaN points are skipped (lines break there)."""
    xs = np.concatenate([np.asarray(s.x, float) for s in series]) if series else np.zeros(0)
    ys = np.concatenate([np.asarray(s.y, float) for s in series]) if series else np.zeros(0)
    ok = np.isfinite(xs) & np.isfinite(ys)
    if ok.any():
        x0, x1 = float(xs[ok].min()), float(xs[ok].max())
        y0, y1 = float(ys[ok].min()), float(ys[ok].max())
    else:
        x0, x1, y0, y1 = 0.0, 1.0, 0.0, 1.0
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    pad = 0.05 * (y1 - y0) if y1 > y0 else 0.5
    y0, y1 = y0 - pad, y1 + pad
    pw, ph = _W - _L - _R, _H - _T - _B

    def px(x):
        return _L + (x - x0) / (x1 - x0) * pw

    def py(y):
        return _T + (1 - (y - y0) / (y1 - y0)) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
           f'font-family="sans-serif" font-size="11">',
           f'<rect width="{_W}" height="{_H}" fill="white"/>',
           f'<rect x="{_L}" y="{_T}" width="{pw}" height="{ph}" fill="none" stroke="black"/>']
    for t in _nice_ticks(x0, x1):
        X = px(t)
        out.append(f'<line x1="{X:.2f}" y1="{_T + ph}" x2="{X:.2f}" y2="{_T + ph + 4}" '
                   'stroke="black"/>')
        out.append(f'<text x="{X:.2f}" y="{_T + ph + 16}" text-anchor="middle">{t:g}</text>')
    for t in _nice_ticks(y0, y1):
        Y = py(t)
        out.append(f'<line x1="{_L - 4}" y1="{Y:.2f}" x2="{_L + pw}" y2="{Y:.2f}" '
                   'stroke="#dddddd"/>')
        out.append(f'<text x="{_L - 7}" y="{Y + 4:.2f}" text-anchor="end">{t:g}</text>')
    if title:
        out.append(f'<text x="{_L + pw / 2}" y="{_T - 14}" text-anchor="middle" '
                   f'font-size="13">{escape(title)}</text>')
    if xlabel:
        out.append(f'<text x="{_L + pw / 2}" y="{_H - 12}" text-anchor="middle">'
                   f'{escape(xlabel)}</text>')
    if ylabel:
        out.append(f'<text x="16" y="{_T + ph / 2}" text-anchor="middle" '
                   f'transform="rotate(-90 16 {_T + ph / 2})">{escape(ylabel)}</text>')

    for i, s in enumerate(series):
        color = _COLORS[i % len(_COLORS)]
        x = np.asarray(s.x, float)
        y = np.asarray(s.y, float)
        good = np.isfinite(x) & np.isfinite(y)
        if s.kind == "scatter":
            for a, b in zip(x[good], y[good]):
                out.append(f'<circle cx="{px(a):.2f}" cy="{py(b):.2f}" r="1.6" '
                           f'fill="{color}" fill-opacity="0.5"/>')
        else:
            seg: List[str] = []
            for a, b, g in zip(x, y, good):
                if g:
                    seg.append(f"{px(a):.2f},{py(b):.2f}")
                elif seg:
                    out.append(f'<polyline points="{" ".join(seg)}" fill="none" '
                               f'stroke="{color}" stroke-width="1.8"/>')
                    seg = []
            if seg:
                out.append(f'<polyline points="{" ".join(seg)}" fill="none" '
                           f'stroke="{color}" stroke-width="1.8"/>')
        ly = _T + 14 + 16 * i
        out.append(f'<rect x="{_L + pw + 12}" y="{ly - 8}" width="14" height="3" '
                   f'fill="{color}"/>')
        out.append(f'<text x="{_L + pw + 30}" y="{ly - 3}">{escape(s.label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(path, series: Sequence[Series], **labels) -> None:
    Path(path).write_text(render_svg(series, **labels), encoding="utf-8")
