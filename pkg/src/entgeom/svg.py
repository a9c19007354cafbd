"""Static SVG drawing of a Newton polygon with its outward edge normals."""

from __future__ import annotations

from xml.sax.saxutils import escape

from .polytope import NewtonPolytope

CELL = 60
MARGIN = 70


def polygon_svg(poly: NewtonPolytope, title: str = "") -> str:
    if poly.dim != 2:
        raise ValueError("only d=2 polygons are drawn")
    xs = [v[0] for v in poly.vertices]
    ys = [v[1] for v in poly.vertices]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    w = (x1 - x0) * CELL + 2 * MARGIN
    h = (y1 - y0) * CELL + 2 * MARGIN + 24

    def px(p):
        return MARGIN + (p[0] - x0) * CELL, 24 + MARGIN + (y1 - p[1]) * CELL

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        "<defs><marker id=\"arrow\" markerWidth=\"8\" markerHeight=\"8\" refX=\"7\" refY=\"4\" orient=\"auto\">"
        '<path d="M0,0 L8,4 L0,8 z" fill="#b22"/></marker></defs>',
    ]
    if title:
        out.append(f'<text x="{w / 2}" y="18" text-anchor="middle" font-family="sans-serif" font-size="14">{escape(title)}</text>')
    for gx in range(x0, x1 + 1):
        for gy in range(y0, y1 + 1):
            cx, cy = px((gx, gy))
            out.append(f'<circle cx="{cx}" cy="{cy}" r="2" fill="#999"/>')
    if len(poly.vertices) >= 2:
        pts = " ".join("{},{}".format(*px(v)) for v in poly.vertices)
        out.append(f'<polygon points="{pts}" fill="#dde8f5" stroke="#235" stroke-width="2"/>')
    for v in sorted(poly.points):
        cx, cy = px(v)
        out.append(f'<circle cx="{cx}" cy="{cy}" r="4" fill="#235"/>')
    for v in poly.vertices:
        cx, cy = px(v)
        out.append(
            f'<text x="{cx + 6}" y="{cy - 6}" font-family="sans-serif" font-size="11">({v[0]},{v[1]})</text>'
        )
    for e in poly.edges:
        ax, ay = px(e.start)
        bx, by = px(e.end)
        mx, my = (ax + bx) / 2, (ay + by) / 2
        n = e.normal
        norm = (n[0] ** 2 + n[1] ** 2) ** 0.5
        ex, ey = mx + 0.6 * CELL * n[0] / norm, my - 0.6 * CELL * n[1] / norm
        out.append(
            f'<line x1="{mx:.1f}" y1="{my:.1f}" x2="{ex:.1f}" y2="{ey:.1f}" stroke="#b22" '
            'stroke-width="1.5" marker-end="url(#arrow)"/>'
        )
        out.append(
            f'<text x="{ex + 4:.1f}" y="{ey + 4:.1f}" font-family="sans-serif" font-size="11" fill="#b22">'
            f"({n[0]},{n[1]}) len {e.lattice_length}</text>"
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
