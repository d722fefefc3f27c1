"""SVG dot plot of pair and hybrid probabilities.

Layout: R x R interior block top-left, S x S interior block bottom-right,
R x S exterior block top-right. Square area is proportional to probability.
"""
from __future__ import annotations

import math
from xml.sax.saxutils import escape

from .errors import IoError
from .ioutil import atomic_write

CELL = 12
MARGIN = 40


def _square(x, y, p, color):
    side = CELL * math.sqrt(p)
    off = (CELL - side) / 2
    return (f'<rect x="{x + off:.3f}" y="{y + off:.3f}" width="{side:.3f}" '
            f'height="{side:.3f}" fill="{color}"/>')


def render_svg(pm, hp: dict, threshold: float = 0.10) -> str:
    n = pm.p_interior_r.shape[0]
    m = pm.p_interior_s.shape[0]
    size = (n + m) * CELL
    w = h = size + 2 * MARGIN
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
           f'width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
           '<g font-family="Helvetica" font-size="8">']
    x0 = y0 = MARGIN
    out.append(f'<rect x="{x0}" y="{y0}" width="{size}" height="{size}" '
               f'fill="none" stroke="black" stroke-width="0.5"/>')
    out.append(f'<line x1="{x0 + n * CELL}" y1="{y0}" x2="{x0 + n * CELL}" y2="{y0 + size}" '
               f'stroke="black" stroke-width="0.5"/>')
    out.append(f'<line x1="{x0}" y1="{y0 + n * CELL}" x2="{x0 + size}" y2="{y0 + n * CELL}" '
               f'stroke="black" stroke-width="0.5"/>')
    for k in range(n):
        out.append(f'<text x="{x0 + k * CELL + 2}" y="{y0 - 4}">{k + 1}</text>')
        out.append(f'<text x="{x0 - 16}" y="{y0 + (k + 1) * CELL - 3}">{k + 1}</text>')
    for k in range(m):
        out.append(f'<text x="{x0 + (n + k) * CELL + 2}" y="{y0 - 4}">{k + 1}</text>')
        out.append(f'<text x="{x0 - 16}" y="{y0 + (n + k + 1) * CELL - 3}">{k + 1}</text>')
    out.append(f'<text x="{x0}" y="{y0 - 16}">R</text>')
    out.append(f'<text x="{x0 + n * CELL}" y="{y0 - 16}">S</text>')
    sq = []
    for i in range(n):
        for j in range(i + 1, n):
            p = float(pm.p_interior_r[i, j])
            if p > 0:
                sq.append(_square(x0 + j * CELL, y0 + i * CELL, p, "black"))
    for i in range(m):
        for j in range(i + 1, m):
            p = float(pm.p_interior_s[i, j])
            if p > 0:
                sq.append(_square(x0 + (n + j) * CELL, y0 + (n + i) * CELL, p, "black"))
    for i in range(n):
        for j in range(m):
            p = float(pm.p_ext[i, j])
            if p > 0:
                sq.append(_square(x0 + (n + j) * CELL, y0 + i * CELL, p, "red"))
    out.extend(sq)
    for (i, j, hh, ll), p in sorted(hp.items(), key=lambda kv: -kv[1]):
        if p > threshold:
            label = escape(f"R[{i},{j}] S[{hh},{ll}] {100 * p:.1f}%")
            out.append(f'<text x="{x0 + (n + ll) * CELL + 2}" y="{y0 + j * CELL}" '
                       f'fill="blue">{label}</text>')
    out.append("</g>\n</svg>\n")
    return "\n".join(out)


def emit_dotplot(pm, hp: dict, out) -> str:
    """Render and write the SVG; returns the document text."""
    svg = render_svg(pm, hp)
    try:
        atomic_write(out, svg)
    except OSError as exc:
        raise IoError(f"cannot write {out}: {exc.strerror or exc}") from None
    return svg
