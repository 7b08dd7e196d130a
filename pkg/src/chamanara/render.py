"""SVG drawing of the square with its glued segments, removed points and orbits."""

from __future__ import annotations

from typing import Iterable, Sequence
from xml.sax.saxutils import escape

from . import __version__
from .dyadic import stream_of
from .surface import EdgeSegment, SquarePoint

MARGIN = 40
CROSS = 3.0
DOT = 1.6


def _color(k: int, family: str) -> str:
    hue = (k * 47 + (0 if family == "I" else 180)) % 360
    return f"hsl({hue},70%,42%)"


def generator_comment() -> str:
    """The single line allowed to differ between renders of the same input."""
    return f"<!-- generator: chamanara {__version__} -->"


class _Canvas:
    def __init__(self, scale: int):
        self.scale = scale
        self.size = scale + 2 * MARGIN

    def xy(self, x, y) -> tuple[str, str]:
        # y grows upward in the square, downward in SVG
        return (f"{MARGIN + float(x) * self.scale:.3f}",
                f"{MARGIN + (1 - float(y)) * self.scale:.3f}")


def _edge_svg(c: _Canvas, e: EdgeSegment) -> list[str]:
    (p, q) = e.endpoints
    x1, y1 = c.xy(p.x, p.y)
    x2, y2 = c.xy(q.x, q.y)
    color = _color(e.k, e.family)
    mx, my = c.xy((p.x + q.x) / 2, (p.y + q.y) / 2)
    dx, dy = {("I", 0): (0, 14), ("I", 1): (0, -6), ("J", 0): (-8, 4), ("J", 1): (8, 4)}[(e.family, e.side)]
    anchor = {"J0": "end", "J1": "start"}.get(f"{e.family}{e.side}", "middle")
    label = f"{e.family}{e.k}"
    return [
        f'<line class="edge" data-edge="{e.label}" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" '
        f'stroke="{color}" stroke-width="3"/>',
        f'<text x="{float(mx) + dx:.3f}" y="{float(my) + dy:.3f}" font-size="9" '
        f'text-anchor="{anchor}" fill="{color}">{label}</text>',
    ]


def _cross(c: _Canvas, x, y) -> str:
    cx, cy = (float(v) for v in c.xy(x, y))
    r = CROSS
    return (f'<path class="removed" d="M{cx - r:.3f},{cy - r:.3f}L{cx + r:.3f},{cy + r:.3f}'
            f'M{cx - r:.3f},{cy + r:.3f}L{cx + r:.3f},{cy - r:.3f}" stroke="black" stroke-width="1"/>')


def render_svg(k_max: int = 6, orbit: Sequence[tuple[int, SquarePoint]] = (),
               scale: int = 512, title: str = "Chamanara surface") -> str:
    """An SVG 1.1 document with edge pairs ``I_k``, ``J_k`` for ``k <= k_max``.

    Partner segments share a colour and a label.  Removed points drawn are
    the corners and the endpoints of the drawn segments; the undrawn part of
    the boundary near the corners is grey.  Orbit points become dots
    labelled by their index.
    """
    c = _Canvas(scale)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        generator_comment(),
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{c.size}" '
        f'height="{c.size}" viewBox="0 0 {c.size} {c.size}">',
        f"<title>{escape(title)}</title>",
    ]
    x0, y0 = c.xy(0, 1)
    out.append(f'<rect x="{x0}" y="{y0}" width="{scale}" height="{scale}" fill="#f8f8f4" '
               'stroke="#bbbbbb" stroke-width="1"/>')
    removed = {(0, 1), (1, 0), (0, 0), (1, 1)}
    for k in range(k_max + 1):
        for family in ("I", "J"):
            out.append(f'<g class="edge-pair" data-family="{family}" data-k="{k}">')
            for side in (0, 1):
                e = EdgeSegment(family, k, side)
                out.extend(_edge_svg(c, e))
                removed.update((p.x, p.y) for p in e.endpoints)
            out.append("</g>")
    for x, y in sorted(removed):
        out.append(_cross(c, x, y))
    for n, p in orbit:
        px = stream_of(p.x).approx(53).value
        py = stream_of(p.y).approx(53).value
        cx, cy = c.xy(px, py)
        out.append(f'<circle class="orbit" data-n="{n}" cx="{cx}" cy="{cy}" r="{DOT}" fill="#1f3b8c"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def strip_generator(svg: str) -> str:
    """The document without its generator comment, for byte comparisons."""
    return "\n".join(line for line in svg.split("\n") if not line.startswith("<!-- generator:"))


__all__ = ["generator_comment", "render_svg", "strip_generator"]
