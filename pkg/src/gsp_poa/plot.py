"""SVG and CSV export of the tradeoff points and their hull.

Floats appear only in drawing coordinates; nothing here feeds a verdict.
"""

from __future__ import annotations

import csv
import io

from .bounds import convex_hull

SIZE = 400
PAD = 40


def _xy(p) -> tuple:
    span = SIZE - 2 * PAD
    return PAD + float(p[0]) * span, SIZE - PAD - float(p[1]) * span


def envelope_svg(points, witness) -> str:
    pts = [p.xy for p in points]
    hull = convex_hull(pts)
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]

    def seg(a, b, style):
        (x1, y1), (x2, y2) = _xy(a), _xy(b)
        lines.append(f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" {style}/>')

    seg((0, 0), (1, 0), 'stroke="black"')
    seg((0, 0), (0, 1), 'stroke="black"')
    seg((1, 0), (0, 1), 'stroke="gray" stroke-dasharray="4 3"')  # x + y = 1
    seg((0, 0), (1, 1), 'stroke="gray"')  # x = y
    if len(hull) >= 2:
        poly = " ".join(f"{x:.2f},{y:.2f}" for x, y in map(_xy, hull))
        lines.append(f'<polygon points="{poly}" fill="#4a90d9" fill-opacity="0.15" stroke="#4a90d9"/>')
    chain = witness.hull
    for a, b in zip(chain, chain[1:]):
        seg(a, b, 'stroke="#c0392b" stroke-width="2"')
    for p in pts:
        cx, cy = _xy(p)
        lines.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="3" fill="#2c3e50"/>')
    cx, cy = _xy((witness.t, witness.t))
    lines.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="5" fill="none" stroke="#c0392b" stroke-width="2"/>')
    lines.append(f'<text x="{cx + 8:.2f}" y="{cy - 8:.2f}" font-size="12">t = {witness.t}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def points_csv(points) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["auction", "slot", "x", "y"])
    for p in points:
        writer.writerow([p.auction, p.slot, str(p.x), str(p.y)])
    return buf.getvalue()
