"""ASCII and SVG drawings of assemblies."""

from __future__ import annotations

import colorsys
import hashlib
from typing import Iterable
from xml.sax.saxutils import escape

from ..core import Assembly, Point

GLYPHS = "#@%&*+=oxsz$?~^!ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrtuvwy0123456789"


def family(name: str) -> str:
    """Group a tile name by everything before its cell label."""
    head = name.split(":", 1)[0]
    head = head.split("@", 1)[0]
    parts = head.split(".")
    return ".".join(parts[:3]) if len(parts) > 1 else head


def glyph_table(a: Assembly) -> dict[str, str]:
    fams = sorted({family(t.name) for _, t in a.items()})
    return {f: GLYPHS[i % len(GLYPHS)] for i, f in enumerate(fams)}


def render_ascii(a: Assembly, legend: bool = True) -> str:
    table = glyph_table(a)
    xs = [p.x for p in a.domain]
    ys = [p.y for p in a.domain]
    rows = []
    for y in range(max(ys), min(ys) - 1, -1):
        row = []
        for x in range(min(xs), max(xs) + 1):
            t = a.get((x, y))
            row.append("." if t is None else table[family(t.name)])
        rows.append("".join(row))
    if legend:
        rows.append("")
        rows += [f"{g} {f}" for f, g in table.items()]
    return "\n".join(rows) + "\n"


def family_colour(name: str) -> str:
    h = int(hashlib.sha256(name.encode()).hexdigest()[:8], 16) / 0xFFFFFFFF
    r, g, b = colorsys.hls_to_rgb(h, 0.55, 0.6)
    return f"#{int(r * 255):02x}{int(g * 255):02x}{int(b * 255):02x}"


def render_svg(a: Assembly, pocs: Iterable = (), cell: int = 10) -> str:
    xs = [p.x for p in a.domain]
    ys = [p.y for p in a.domain]
    x0, y1 = min(xs), max(ys)
    w = (max(xs) - x0 + 1) * cell
    h = (y1 - min(ys) + 1) * cell
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
    ]
    for p, t in sorted(a.items()):
        px, py = (p.x - x0) * cell, (y1 - p.y) * cell
        out.append(
            f'<rect x="{px}" y="{py}" width="{cell}" height="{cell}" fill="{family_colour(family(t.name))}" '
            f'stroke="#333" stroke-width="0.5"><title>{escape(t.name)} ({p.x},{p.y})</title></rect>'
        )
    r = cell * 0.3
    for q in pocs:
        q = Point(*q)
        cx, cy = (q.x - x0 + 0.5) * cell, (y1 - q.y + 0.5) * cell
        out.append(f'<circle cx="{cx}" cy="{cy}" r="{r}" fill="none" stroke="#000" stroke-width="1"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
