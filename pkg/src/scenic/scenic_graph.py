"""The scenic graph: bisector intersections as nodes, bisector segments as
edges, plus Floyd-Warshall distances over it."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import CoincidentPair, EmptyGraph, Unreachable, ValidationError
from .geometry import (
    EPS_GEOM,
    BoundingBox,
    LineStd,
    Mode,
    Point2,
    Segment,
    clip_line_to_box,
    intersect_lines,
    make_bounding_box,
    perpendicular_bisector,
)


class ScenicWarning(UserWarning):
    pass


@dataclass(frozen=True)
class PointSet:
    """Points of interest. In single-class mode every point lives in ``reds``."""

    reds: tuple[Point2, ...]
    blues: tuple[Point2, ...] = ()
    mode: Mode = "two_class"

    def __post_init__(self) -> None:
        object.__setattr__(self, "reds", tuple(self.reds))
        object.__setattr__(self, "blues", tuple(self.blues))
        if self.mode not in ("two_class", "single_class"):
            raise ValidationError(f"unknown mode {self.mode!r}")
        if self.mode == "single_class" and self.blues:
            raise ValidationError("single_class point sets keep all points in reds")
        pts = self.all_points
        if not pts:
            return
        tol = EPS_GEOM * max(_extent_diagonal(pts), 1.0)
        for name, group in (("red", self.reds), ("blue", self.blues)):
            for i in range(len(group)):
                for j in range(i + 1, len(group)):
                    if group[i].dist(group[j]) <= tol:
                        raise ValidationError(f"duplicate {name} points at indices {i} and {j}")

    @property
    def all_points(self) -> list[Point2]:
        return list(self.reds) + list(self.blues)

    def pairs(self) -> list[tuple[int, int]]:
        """Index pairs whose bisectors are scenic paths (red, blue) or (i < j)."""
        if self.mode == "two_class":
            return [(i, j) for i in range(len(self.reds)) for j in range(len(self.blues))]
        n = len(self.reds)
        return [(i, j) for i in range(n) for j in range(i + 1, n)]

    def pair_points(self, pair: tuple[int, int]) -> tuple[Point2, Point2]:
        i, j = pair
        return self.reds[i], (self.blues[j] if self.mode == "two_class" else self.reds[j])

    @property
    def pair_count(self) -> int:
        if self.mode == "two_class":
            return len(self.reds) * len(self.blues)
        n = len(self.reds)
        return n * (n - 1) // 2


def _extent_diagonal(points: Sequence[Point2]) -> float:
    xs = [p.x for p in points]
    ys = [p.y for p in points]
    return math.hypot(max(xs) - min(xs), max(ys) - min(ys))


def default_delta(ps: PointSet) -> float:
    return 0.1 * _extent_diagonal(ps.all_points)


@dataclass(frozen=True)
class Bisector:
    id: int
    line: LineStd
    pairs: tuple[tuple[int, int], ...]
    clip: Segment


@dataclass(frozen=True)
class IntersectionNode:
    id: int
    pos: Point2
    bisector_ids: tuple[int, ...]


@dataclass(frozen=True)
class ScenicEdge:
    id: int
    u: int
    v: int
    weight: float
    bisector_id: int

    def other(self, node: int) -> int:
        return self.v if node == self.u else self.u


@dataclass(frozen=True)
class ScenicGraph:
    points: PointSet
    box: BoundingBox
    bisectors: tuple[Bisector, ...]
    nodes: tuple[IntersectionNode, ...]
    edges: tuple[ScenicEdge, ...]
    eps: float = EPS_GEOM
    warnings: tuple[str, ...] = ()

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in self.nodes]
        for e in self.edges:
            adj[e.u].append(e.id)
            adj[e.v].append(e.id)
        return tuple(tuple(a) for a in adj)

    @cached_property
    def _edge_index(self) -> dict[tuple[int, int], int]:
        return {(min(e.u, e.v), max(e.u, e.v)): e.id for e in self.edges}

    def edge_between(self, u: int, v: int) -> ScenicEdge | None:
        eid = self._edge_index.get((min(u, v), max(u, v)))
        return None if eid is None else self.edges[eid]

    def nodes_on(self, bisector_id: int) -> list[int]:
        """Node ids on a bisector, sorted along its direction."""
        line = self.bisectors[bisector_id].line
        on = [n.id for n in self.nodes if bisector_id in n.bisector_ids]
        return sorted(on, key=lambda i: (line.param(self.nodes[i].pos), i))

    @property
    def scale(self) -> float:
        return self.box.diagonal

    @property
    def is_empty(self) -> bool:
        return not self.edges

    def summary(self) -> dict[str, int]:
        return {
            "red": len(self.points.reds),
            "blue": len(self.points.blues),
            "bisectors": len(self.bisectors),
            "nodes": len(self.nodes),
            "edges": len(self.edges),
        }


def _enumerate(ps: PointSet, box: BoundingBox, eps: float) -> tuple[list[Bisector], list[str]]:
    scale = max(box.diagonal, 1.0)
    notes: list[str] = []
    lines: list[LineStd] = []
    pairs: list[list[tuple[int, int]]] = []
    for pair in ps.pairs():
        u, v = ps.pair_points(pair)
        try:
            line = perpendicular_bisector(u, v, eps * scale)
        except CoincidentPair:
            notes.append(f"skipped pair {pair}: points coincide, bisector undefined")
            continue
        for k, other in enumerate(lines):
            if line.same_as(other, eps, scale):
                pairs[k].append(pair)
                break
        else:
            lines.append(line)
            pairs.append([pair])
    out = []
    for line, prs in zip(lines, pairs):
        clip = clip_line_to_box(line, box)
        if clip is None:
            notes.append(f"dropped bisector of pairs {prs}: misses the bounding box")
            continue
        out.append(Bisector(len(out), line, tuple(prs), clip))
    return out, notes


def enumerate_bisectors(ps: PointSet, box: BoundingBox, eps: float = EPS_GEOM) -> list[Bisector]:
    """One bisector per eligible pair; coincident lines are merged into one
    carrying all their pairs, and lines missing the box are dropped."""
    bisectors, notes = _enumerate(ps, box, eps)
    for note in notes:
        warnings.warn(note, ScenicWarning, stacklevel=2)
    return bisectors


def _dedupe(points: list[tuple[Point2, set[int]]], tol: float) -> list[tuple[Point2, set[int]]]:
    cell = tol if tol > 0 else 1e-12
    grid: dict[tuple[int, int], list[int]] = {}
    merged: list[tuple[Point2, set[int]]] = []
    for pos, ids in points:
        cx, cy = math.floor(pos.x / cell), math.floor(pos.y / cell)
        hit = None
        for gx in (cx - 1, cx, cx + 1):
            for gy in (cy - 1, cy, cy + 1):
                for k in grid.get((gx, gy), ()):
                    if merged[k][0].dist(pos) <= tol:
                        hit = k
                        break
                if hit is not None:
                    break
            if hit is not None:
                break
        if hit is None:
            grid.setdefault((cx, cy), []).append(len(merged))
            merged.append((pos, set(ids)))
        else:
            merged[hit][1].update(ids)
    return merged


def build_graph(
    ps: PointSet,
    delta: float | None = None,
    eps: float = EPS_GEOM,
    strict: bool = False,
) -> ScenicGraph:
    """Build G(I_P, E_P) for ``ps`` inside the box expanded by ``delta``.

    A graph without nodes is a legitimate outcome and is returned as is;
    pass ``strict=True`` to get EmptyGraph raised instead.
    """
    if delta is None:
        delta = default_delta(ps)
    if ps.mode == "two_class" and (not ps.reds or not ps.blues):
        raise ValidationError("two_class mode needs at least one red and one blue point")
    if ps.mode == "single_class" and len(ps.reds) < 2:
        raise ValidationError("single_class mode needs at least two points")
    box = make_bounding_box(ps.all_points, delta)
    bisectors, notes = _enumerate(ps, box, eps)
    tol = eps * max(box.diagonal, 1.0)

    raw: list[tuple[Point2, set[int]]] = []
    for i in range(len(bisectors)):
        for j in range(i + 1, len(bisectors)):
            p = intersect_lines(bisectors[i].line, bisectors[j].line, eps)
            if p is not None and box.contains(p, tol):
                raw.append((p, {i, j}))
    merged = _dedupe(raw, tol)
    merged.sort(key=lambda item: (item[0].x, item[0].y))
    nodes = tuple(IntersectionNode(k, pos, tuple(sorted(ids))) for k, (pos, ids) in enumerate(merged))

    edges: list[ScenicEdge] = []
    for bis in bisectors:
        on = [n for n in nodes if bis.id in n.bisector_ids]
        on.sort(key=lambda n: (bis.line.param(n.pos), n.id))
        for a, b in zip(on, on[1:]):
            edges.append(ScenicEdge(len(edges), min(a.id, b.id), max(a.id, b.id), a.pos.dist(b.pos), bis.id))

    if strict and not nodes:
        raise EmptyGraph("no bisector intersections inside the bounding box")
    return ScenicGraph(ps, box, tuple(bisectors), nodes, tuple(edges), eps, tuple(notes))


# -- shortest paths ----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ApspTables:
    """Floyd-Warshall output. ``next[i, j]`` is the hop after ``i`` on a shortest
    i -> j path, or -1 when ``j`` is unreachable."""

    dist: np.ndarray
    next: np.ndarray

    def d(self, u: int, v: int) -> float:
        return float(self.dist[u, v])


def floyd_warshall(g: ScenicGraph) -> ApspTables:
    n = len(g.nodes)
    dist = np.full((n, n), np.inf)
    nxt = np.full((n, n), -1, dtype=np.int64)
    for e in g.edges:
        for a, b in ((e.u, e.v), (e.v, e.u)):
            if e.weight < dist[a, b]:
                dist[a, b] = e.weight
                nxt[a, b] = b
    idx = np.arange(n)
    dist[idx, idx] = 0.0
    nxt[idx, idx] = idx
    for k in range(n):
        # row and column k cannot change while relaxing through k itself
        through = dist[:, k : k + 1] + dist[k : k + 1, :]
        better = through < dist
        dist = np.where(better, through, dist)
        nxt = np.where(better, nxt[:, k : k + 1], nxt)
    dist.setflags(write=False)
    nxt.setflags(write=False)
    return ApspTables(dist, nxt)


def shortest_path(t: ApspTables, u: int, v: int) -> list[int]:
    if not math.isfinite(t.dist[u, v]):
        raise Unreachable(f"node {v} is unreachable from node {u}")
    path = [u]
    while path[-1] != v:
        path.append(int(t.next[path[-1], v]))
    return path


def smallest_edge(g: ScenicGraph) -> ScenicEdge:
    if not g.edges:
        raise EmptyGraph("the scenic graph has no edges")
    return min(g.edges, key=lambda e: (e.weight, e.id))
