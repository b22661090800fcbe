"""Dependency-free SVG line plots of result tables."""

import math
from xml.sax.saxutils import escape

from .errors import ValidationError

WIDTH = 640
HEIGHT = 400
MARGIN = 60
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f")


def _range(values):
    lo, hi = min(values), max(values)
    if lo == hi:
        return lo - 0.5, hi + 0.5
    return lo, hi


def to_pixels(x, y, xr, yr):
    """Map data coordinates into the plot frame (y axis pointing up)."""
    px = MARGIN + (x - xr[0]) / (xr[1] - xr[0]) * (WIDTH - 2 * MARGIN)
    py = HEIGHT - MARGIN - (y - yr[0]) / (yr[1] - yr[0]) * (HEIGHT - 2 * MARGIN)
    return px, py


def _column(header, name):
    if name not in header:
        raise ValidationError(f"column {name!r} not found; have {', '.join(header)}")
    return header.index(name)


def _to_float(text, name):
    try:
        return float(text)
    except ValueError as exc:
        raise ValidationError(f"column {name!r} has non-numeric value {text!r}") from exc


def plot_svg(header, rows, x, y, series=()):
    """Render one polyline per distinct value of the ``series`` columns.

    Non-finite points are dropped.  A series with a single point is drawn
    as a circle marker.  Output depends only on the inputs.

    Returns
    -------
    str
        Complete SVG document.
    """
    ix, iy = _column(header, x), _column(header, y)
    iss = [_column(header, s) for s in series]
    groups = {}
    for row in rows:
        key = tuple(row[i] for i in iss)
        xv, yv = _to_float(row[ix], x), _to_float(row[iy], y)
        if math.isfinite(xv) and math.isfinite(yv):
            groups.setdefault(key, []).append((xv, yv))
    pts = [p for g in groups.values() for p in g]
    if not pts:
        raise ValidationError("table has no finite points to plot")
    xr = _range([p[0] for p in pts])
    yr = _range([p[1] for p in pts])

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<line x1="{MARGIN}" y1="{HEIGHT - MARGIN}" x2="{WIDTH - MARGIN}" y2="{HEIGHT - MARGIN}" stroke="black"/>',
        f'<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{HEIGHT - MARGIN}" stroke="black"/>',
        f'<text x="{WIDTH / 2:.2f}" y="{HEIGHT - 15}" text-anchor="middle" font-size="14">{escape(x)}</text>',
        f'<text x="15" y="{HEIGHT / 2:.2f}" text-anchor="middle" font-size="14" '
        f'transform="rotate(-90 15 {HEIGHT / 2:.2f})">{escape(y)}</text>',
    ]
    for val, (px, py) in ((xr[0], to_pixels(xr[0], yr[0], xr, yr)), (xr[1], to_pixels(xr[1], yr[0], xr, yr))):
        out.append(f'<text x="{px:.2f}" y="{py + 18:.2f}" text-anchor="middle" font-size="11">{val:.4g}</text>')
    for val, (px, py) in ((yr[0], to_pixels(xr[0], yr[0], xr, yr)), (yr[1], to_pixels(xr[0], yr[1], xr, yr))):
        out.append(f'<text x="{px - 6:.2f}" y="{py + 4:.2f}" text-anchor="end" font-size="11">{val:.4g}</text>')

    for n, (key, group) in enumerate(groups.items()):
        color = PALETTE[n % len(PALETTE)]
        label = ", ".join(f"{s}={k}" for s, k in zip(series, key)) or y
        coords = [to_pixels(px, py, xr, yr) for px, py in group]
        if len(coords) == 1:
            cx, cy = coords[0]
            out.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="4" fill="{color}" data-series="{escape(label)}"/>')
        else:
            path = " ".join(f"{cx:.2f},{cy:.2f}" for cx, cy in coords)
            out.append(
                f'<polyline points="{path}" fill="none" stroke="{color}" stroke-width="1.5" '
                f'data-series="{escape(label)}"/>'
            )
        ly = MARGIN + 14 * n
        out.append(
            f'<text x="{WIDTH - MARGIN + 4}" y="{ly}" font-size="10" fill="{color}">{escape(label)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
