"""Hand-written SVG figures: table, caustic, center loci and orbit sides."""

from __future__ import annotations

from xml.sax.saxutils import quoteattr

import numpy as np

from .conic import Ellipse, caustic_axes

MIN_CURVE_POINTS = 512
STYLES = {
    "table": "stroke:#1f3b73;stroke-width:1.5;fill:none",
    "caustic": "stroke:#2e8b57;stroke-width:1;fill:none;stroke-dasharray:4 2",
    "orbit": "stroke:#c0392b;stroke-width:1;fill:none",
    "locus-bisector": "stroke:#8e44ad;stroke-width:1;fill:none",
    "locus-incenter": "stroke:#d68910;stroke-width:1;fill:none",
}


def _ellipse_points(a, b, n):
    t = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    return np.column_stack([a * np.cos(t), b * np.sin(t)])


def _fmt(v: float) -> str:
    return f"{v:.6f}".rstrip("0").rstrip(".") if v != 0 else "0"


def _path(points, closed: bool = True) -> str:
    # SVG y grows downward
    cmds = [f"M {_fmt(points[0][0])} {_fmt(-points[0][1])}"]
    cmds += [f"L {_fmt(x)} {_fmt(-y)}" for x, y in points[1:]]
    if closed:
        cmds.append("Z")
    return " ".join(cmds)


def render_svg(E: Ellipse, loci: dict | None = None, orbit=None, n: int = MIN_CURVE_POINTS,
               width: int = 800) -> str:
    """SVG document with one ``<path>`` per curve.

    ``loci`` maps a center kind name to an ``(m, 2)`` array of locus points,
    drawn in parameter order. The viewBox covers the table's bounding box,
    enlarged to include every locus, plus a 5% margin.
    """
    n = max(n, MIN_CURVE_POINTS)
    loci = loci or {}
    xmin, xmax, ymin, ymax = -E.a, E.a, -E.b, E.b
    for pts in loci.values():
        pts = np.asarray(pts, dtype=float)
        xmin, xmax = min(xmin, pts[:, 0].min()), max(xmax, pts[:, 0].max())
        ymin, ymax = min(ymin, pts[:, 1].min()), max(ymax, pts[:, 1].max())
    pad = 0.05 * max(xmax - xmin, ymax - ymin)
    vx, vy = xmin - pad, -(ymax + pad)
    vw, vh = xmax - xmin + 2 * pad, ymax - ymin + 2 * pad
    height = int(round(width * vh / vw))

    paths = [("table", _path(_ellipse_points(E.a, E.b, n)))]
    a1, b1 = caustic_axes(E)
    paths.append(("caustic", _path(_ellipse_points(a1, b1, n))))
    for kind, pts in loci.items():
        pts = np.asarray(pts, dtype=float)
        if len(pts) < n:
            raise ValueError(f"locus curves need at least {n} points, got {len(pts)}")
        paths.append((f"locus-{kind}", _path(pts)))
    if orbit is not None:
        paths.append(("orbit", _path([tuple(p) for p in orbit.vertices])))

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="{_fmt(vx)} {_fmt(vy)} {_fmt(vw)} {_fmt(vh)}">',
        "  <g>",
    ]
    for name, d in paths:
        style = STYLES.get(name, "stroke:#000;fill:none") + ";vector-effect:non-scaling-stroke"
        lines.append(f"    <path id={quoteattr(name)} style={quoteattr(style)} d={quoteattr(d)}/>")
    lines += ["  </g>", "</svg>", ""]
    return "\n".join(lines)
