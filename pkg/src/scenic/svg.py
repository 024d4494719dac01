"""SVG 1.1 rendering of a route report.

Colours follow the usual figure convention: green bisectors, pink route,
red/blue points of interest. Repeated edges (bridges) are drawn dashed in a
darker magenta so they stand out from the rest of the route.
"""

from __future__ import annotations

import os
from typing import TYPE_CHECKING

from .metrics import repeated_edges

if TYPE_CHECKING:
    from .app import RouteReport

WIDTH = 800.0
MARGIN = 20.0

BISECTOR = "#2ca02c"
ROUTE = "#ff69b4"
REPEATED = "#8b008b"
NODE = "#555555"
BOX = "#999999"


def _fmt(v: float) -> str:
    text = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if text in ("-0", "") else text


def render_svg_text(report: RouteReport) -> str:
    g = report.graph
    box = g.box
    span = max(box.width, box.height) or 1.0
    scale = (WIDTH - 2 * MARGIN) / span
    height = box.height * scale + 2 * MARGIN
    width = box.width * scale + 2 * MARGIN

    def sx(x: float) -> str:
        return _fmt(MARGIN + (x - box.min.x) * scale)

    def sy(y: float) -> str:
        # SVG y grows downwards
        return _fmt(MARGIN + (box.max.y - y) * scale)

    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_fmt(width)}" height="{_fmt(height)}" '
        f'viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
        f'<rect x="{_fmt(MARGIN)}" y="{_fmt(MARGIN)}" width="{_fmt(box.width * scale)}" '
        f'height="{_fmt(box.height * scale)}" fill="none" stroke="{BOX}" stroke-width="1" class="box"/>',
        '<g class="bisectors">',
    ]
    for b in g.bisectors:
        out.append(
            f'<line x1="{sx(b.clip.p.x)}" y1="{sy(b.clip.p.y)}" x2="{sx(b.clip.q.x)}" y2="{sy(b.clip.q.y)}" '
            f'stroke="{BISECTOR}" stroke-width="1" data-bisector="{b.id}"/>'
        )
    out.append("</g>")

    route = report.route
    if route is not None:
        bridges = set(repeated_edges(route, g))
        out.append('<g class="route">')
        for eid in route.edge_ids:
            e = g.edges[eid]
            p, q = g.nodes[e.u].pos, g.nodes[e.v].pos
            style = (
                f'stroke="{REPEATED}" stroke-width="3" stroke-dasharray="6,3" class="repeated"'
                if eid in bridges
                else f'stroke="{ROUTE}" stroke-width="3"'
            )
            out.append(f'<line x1="{sx(p.x)}" y1="{sy(p.y)}" x2="{sx(q.x)}" y2="{sy(q.y)}" {style} data-edge="{eid}"/>')
        out.append("</g>")

    on_route = set(route.s_nodes) if route is not None else set()
    out.append('<g class="nodes">')
    for n in g.nodes:
        colour = ROUTE if n.id in on_route else NODE
        out.append(f'<circle cx="{sx(n.pos.x)}" cy="{sy(n.pos.y)}" r="2.5" fill="{colour}" data-node="{n.id}"/>')
    out.append("</g>")

    ps = g.points
    out.append('<g class="points">')
    groups = [("red", ps.reds)] if ps.mode == "two_class" else [("orange", ps.reds)]
    if ps.mode == "two_class":
        groups.append(("blue", ps.blues))
    for colour, pts in groups:
        for p in pts:
            out.append(f'<circle cx="{sx(p.x)}" cy="{sy(p.y)}" r="5" fill="{colour}" stroke="black" stroke-width="0.5"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_svg(report: RouteReport, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(render_svg_text(report))
