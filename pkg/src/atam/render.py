"""ASCII and SVG pictures of assemblies.

Both renderers are byte-deterministic. The drawn area always covers the
origin so the absolute frame can be read off the picture.
"""
from __future__ import annotations

import hashlib
from xml.sax.saxutils import escape

from .model import Assembly, Direction, Position, TileSet

CELL = 40
MARGIN = 10
EMPTY_CELL = "."


def _frame(alpha: Assembly) -> tuple[int, int, int, int]:
    if len(alpha) == 0:
        return 0, 0, 0, 0
    x0, y0, x1, y1 = alpha.bounding_box()
    return min(x0, 0), min(y0, 0), max(x1, 0), max(y1, 0)


def default_color(name: str) -> str:
    digest = hashlib.sha256(name.encode("utf-8")).digest()
    # keep colours light enough for dark labels
    r, g, b = (128 + c // 2 for c in digest[:3])
    return f"#{r:02x}{g:02x}{b:02x}"


def _ansi(color: str) -> str:
    r, g, b = (int(color[i:i + 2], 16) for i in (1, 3, 5))
    return f"\x1b[48;2;{r};{g};{b}m\x1b[30m"


def render_ascii(alpha: Assembly, ts: TileSet, *, color: bool = False) -> str:
    """One character per lattice cell, top row = largest y, ``.`` for empty cells."""
    x0, y0, x1, y1 = _frame(alpha)
    lines = []
    for y in range(y1, y0 - 1, -1):
        row = []
        for x in range(x0, x1 + 1):
            name = alpha.get(Position(x, y))
            if name is None:
                row.append(EMPTY_CELL)
                continue
            tile = ts[name]
            ch = tile.short_label
            if color:
                ch = _ansi(tile.display.color or default_color(name)) + ch + "\x1b[0m"
            row.append(ch)
        lines.append("".join(row))
    return "\n".join(lines) + "\n"


def render_svg(alpha: Assembly, ts: TileSet) -> str:
    """One square per tile with its colour and label; glue strength as tick marks per side."""
    x0, y0, x1, y1 = _frame(alpha)
    width = (x1 - x0 + 1) * CELL + 2 * MARGIN
    height = (y1 - y0 + 1) * CELL + 2 * MARGIN
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
    ]
    for p, name in alpha.canonical():
        tile = ts[name]
        left = MARGIN + (p.x - x0) * CELL
        top = MARGIN + (y1 - p.y) * CELL
        fill = tile.display.color or default_color(name)
        out.append(f'<g data-x="{p.x}" data-y="{p.y}" data-tile="{escape(name, {chr(34): "&quot;"})}">')
        out.append(f'<rect x="{left}" y="{top}" width="{CELL}" height="{CELL}" '
                   f'fill="{escape(fill)}" stroke="#333333" stroke-width="1"/>')
        label = escape(tile.display.label or name)
        out.append(f'<text x="{left + CELL // 2}" y="{top + CELL // 2 + 4}" font-family="monospace" '
                   f'font-size="11" text-anchor="middle">{label}</text>')
        for d in Direction:
            s = tile.glue(d).strength
            for k in range(s):
                out.append(_tick(left, top, d, k, s))
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _tick(left: int, top: int, d: Direction, k: int, count: int) -> str:
    # ticks are spread evenly along the side, pointing inward
    step = CELL / (count + 1)
    along = round(step * (k + 1), 2)
    inset = 5
    if d is Direction.NORTH:
        xa, ya, xb, yb = left + along, top, left + along, top + inset
    elif d is Direction.SOUTH:
        xa, ya, xb, yb = left + along, top + CELL, left + along, top + CELL - inset
    elif d is Direction.WEST:
        xa, ya, xb, yb = left, top + along, left + inset, top + along
    else:
        xa, ya, xb, yb = left + CELL, top + along, left + CELL - inset, top + along
    return f'<line x1="{xa:g}" y1="{ya:g}" x2="{xb:g}" y2="{yb:g}" stroke="#000000" stroke-width="2"/>'


def render(alpha: Assembly, ts: TileSet, fmt: str = "ascii", *, color: bool = False) -> bytes:
    if fmt == "ascii":
        return render_ascii(alpha, ts, color=color).encode("utf-8")
    if fmt == "svg":
        return render_svg(alpha, ts).encode("utf-8")
    raise ValueError(f"unknown render format {fmt!r}")
