"""Minimal log-log line plots as standalone SVG text."""

import math
from xml.sax.saxutils import escape

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")
WIDTH, HEIGHT = 640, 420
MARGIN = 60


def _decades(lo, hi):
    return list(range(math.floor(lo), math.ceil(hi) + 1))


def loglog_svg(x, series, title="", xlabel="", ylabel=""):
    """Render ``{name: ys}`` against ``x`` on log axes.

    Points with a non-positive or non-finite coordinate are dropped, and each
    series is drawn as one polyline through the points that remain.
    """
    pts = {}
    for name, ys in series.items():
        keep = [(math.log10(a), math.log10(b)) for a, b in zip(x, ys)
                if a > 0 and math.isfinite(a) and b is not None and math.isfinite(b) and b > 0]
        pts[name] = keep
    allx = [p[0] for v in pts.values() for p in v] or [0.0, 1.0]
    ally = [p[1] for v in pts.values() for p in v] or [0.0, 1.0]
    x0, x1 = math.floor(min(allx)), math.ceil(max(allx))
    y0, y1 = math.floor(min(ally)), math.ceil(max(ally))
    x1 = x1 if x1 > x0 else x0 + 1
    y1 = y1 if y1 > y0 else y0 + 1
    pw, ph = WIDTH - 2 * MARGIN, HEIGHT - 2 * MARGIN

    def sx(v):
        return MARGIN + (v - x0) / (x1 - x0) * pw

    def sy(v):
        return HEIGHT - MARGIN - (v - y0) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{MARGIN}" y="{MARGIN}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for d in _decades(x0, x1):
        X = sx(d)
        out.append(f'<line x1="{X:.2f}" y1="{HEIGHT - MARGIN}" x2="{X:.2f}" y2="{MARGIN}" stroke="#ddd"/>')
        out.append(f'<text x="{X:.2f}" y="{HEIGHT - MARGIN + 16}" text-anchor="middle">1e{d}</text>')
    for d in _decades(y0, y1):
        Y = sy(d)
        out.append(f'<line x1="{MARGIN}" y1="{Y:.2f}" x2="{WIDTH - MARGIN}" y2="{Y:.2f}" stroke="#ddd"/>')
        out.append(f'<text x="{MARGIN - 6}" y="{Y + 4:.2f}" text-anchor="end">1e{d}</text>')
    for k, (name, p) in enumerate(pts.items()):
        color = PALETTE[k % len(PALETTE)]
        if p:
            coords = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in p)
            out.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        ly = MARGIN + 14 + 16 * k
        out.append(f'<line x1="{WIDTH - MARGIN - 110}" y1="{ly - 4}" x2="{WIDTH - MARGIN - 90}" y2="{ly - 4}" '
                   f'stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{WIDTH - MARGIN - 85}" y="{ly}">{escape(name)}</text>')
    out.append(f'<text x="{WIDTH / 2}" y="{MARGIN / 2}" text-anchor="middle" font-size="14">{escape(title)}</text>')
    out.append(f'<text x="{WIDTH / 2}" y="{HEIGHT - 15}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text x="15" y="{HEIGHT / 2}" text-anchor="middle" '
               f'transform="rotate(-90 15 {HEIGHT / 2})">{escape(ylabel)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
