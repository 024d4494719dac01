"""Planar primitives: bisectors, line intersection, box clipping, hulls.

All tolerances are relative: callers pass ``eps`` already multiplied by the
relevant length scale (normally the bounding-box diagonal) unless a function
says otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Literal, Sequence, Union

import numpy as np
from scipy.spatial import Delaunay, QhullError

from .errors import CoincidentPair, DegenerateBox, DegenerateInput, EmptyInput

EPS_GEOM = 1e-9

Mode = Literal["two_class", "single_class"]
Alpha = Union[float, Literal["auto"]]


@dataclass(frozen=True)
class Point2:
    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite coordinate in Point2({self.x}, {self.y})")
        # normalise ints / numpy scalars so equality and JSON stay predictable
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))

    def __iter__(self) -> Iterator[float]:
        yield self.x
        yield self.y

    def __sub__(self, other: Point2) -> tuple[float, float]:
        return (self.x - other.x, self.y - other.y)

    def dist(self, other: Point2) -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class LineStd:
    """Line ``a*x + b*y = c`` with unit normal and canonical sign."""

    a: float
    b: float
    c: float

    def __post_init__(self) -> None:
        norm2 = self.a * self.a + self.b * self.b
        if abs(norm2 - 1.0) > 1e-12:
            raise ValueError("LineStd normal must be unit length; use make_line()")

    @property
    def direction(self) -> tuple[float, float]:
        return (-self.b, self.a)

    @property
    def anchor(self) -> Point2:
        """Point of the line closest to the origin."""
        return Point2(self.a * self.c, self.b * self.c)

    def residual(self, p: Point2) -> float:
        return self.a * p.x + self.b * p.y - self.c

    def param(self, p: Point2) -> float:
        """Signed coordinate of ``p`` along the line direction."""
        return -self.b * p.x + self.a * p.y

    def at(self, t: float) -> Point2:
        return Point2(self.a * self.c - self.b * t, self.b * self.c + self.a * t)

    def same_as(self, other: LineStd, eps: float, scale: float = 1.0) -> bool:
        """Coincidence test; ``eps`` is relative, ``scale`` sets the length unit."""
        tol_c = eps * max(scale, 1.0)
        return (
            abs(self.a - other.a) <= eps
            and abs(self.b - other.b) <= eps
            and abs(self.c - other.c) <= tol_c
        ) or (
            abs(self.a + other.a) <= eps
            and abs(self.b + other.b) <= eps
            and abs(self.c + other.c) <= tol_c
        )


def make_line(a: float, b: float, c: float) -> LineStd:
    norm = math.hypot(a, b)
    if norm == 0.0 or not math.isfinite(norm):
        raise ValueError("line normal must be non-zero and finite")
    a, b, c = a / norm, b / norm, c / norm
    # canonical sign: a > 0, or a == 0 and b > 0 (with a tiny dead band on a)
    if a < -1e-15 or (abs(a) <= 1e-15 and b < 0):
        a, b, c = -a, -b, -c
    if abs(a) <= 1e-15:
        a = 0.0
    if abs(b) <= 1e-15:
        b = 0.0
    # re-normalise after snapping so the unit-normal invariant holds exactly enough
    norm = math.hypot(a, b)
    return LineStd(a / norm, b / norm, c / norm)


@dataclass(frozen=True)
class Segment:
    p: Point2
    q: Point2

    def __post_init__(self) -> None:
        if self.p.dist(self.q) <= EPS_GEOM * max(1.0, abs(self.p.x), abs(self.p.y)):
            raise ValueError("degenerate segment")

    @property
    def length(self) -> float:
        return self.p.dist(self.q)


@dataclass(frozen=True)
class BoundingBox:
    min: Point2
    max: Point2
    delta: float = 0.0

    @property
    def diagonal(self) -> float:
        return self.min.dist(self.max)

    @property
    def width(self) -> float:
        return self.max.x - self.min.x

    @property
    def height(self) -> float:
        return self.max.y - self.min.y

    def contains(self, p: Point2, tol: float = 0.0) -> bool:
        return (
            self.min.x - tol <= p.x <= self.max.x + tol
            and self.min.y - tol <= p.y <= self.max.y + tol
        )

    def on_boundary(self, p: Point2, tol: float) -> bool:
        if not self.contains(p, tol):
            return False
        return (
            abs(p.x - self.min.x) <= tol
            or abs(p.x - self.max.x) <= tol
            or abs(p.y - self.min.y) <= tol
            or abs(p.y - self.max.y) <= tol
        )


def perpendicular_bisector(r: Point2, b: Point2, eps: float = EPS_GEOM) -> LineStd:
    """Line of points equidistant from ``r`` and ``b``.

    With normal n = b - r and midpoint m, the line is n·p = n·m.
    """
    nx, ny = b.x - r.x, b.y - r.y
    if math.hypot(nx, ny) <= eps:
        raise CoincidentPair(f"points {r} and {b} coincide; bisector undefined")
    mx, my = (r.x + b.x) / 2.0, (r.y + b.y) / 2.0
    return make_line(nx, ny, nx * mx + ny * my)


def intersect_lines(l1: LineStd, l2: LineStd, eps: float = EPS_GEOM) -> Point2 | None:
    det = l1.a * l2.b - l1.b * l2.a
    if abs(det) <= eps:
        return None
    x = (l1.c * l2.b - l1.b * l2.c) / det
    y = (l1.a * l2.c - l1.c * l2.a) / det
    return Point2(x, y)


def make_bounding_box(points: Sequence[Point2], delta: float = 0.0) -> BoundingBox:
    if not points:
        raise EmptyInput("bounding box of an empty point set")
    xs = [p.x for p in points]
    ys = [p.y for p in points]
    lo = (min(xs) - delta, min(ys) - delta)
    hi = (max(xs) + delta, max(ys) + delta)
    if lo[0] > hi[0] or lo[1] > hi[1] or (lo[0] == hi[0] and lo[1] == hi[1]):
        raise DegenerateBox(f"delta={delta} collapses or inverts the box")
    return BoundingBox(Point2(*lo), Point2(*hi), float(delta))


def clip_line_to_box(line: LineStd, box: BoundingBox) -> Segment | None:
    """Chord of ``line`` inside the closed box (Liang-Barsky on the line's
    parametric form), or None when it misses or only grazes a corner."""
    ox, oy = line.a * line.c, line.b * line.c
    dx, dy = line.direction
    t0, t1 = -math.inf, math.inf
    for d, o, lo, hi in ((dx, ox, box.min.x, box.max.x), (dy, oy, box.min.y, box.max.y)):
        if abs(d) <= 1e-15:
            if o < lo or o > hi:
                return None
            continue
        ta, tb = (lo - o) / d, (hi - o) / d
        if ta > tb:
            ta, tb = tb, ta
        t0, t1 = max(t0, ta), min(t1, tb)
    if t1 - t0 <= EPS_GEOM * max(box.diagonal, 1.0):
        return None
    p = Point2(ox + t0 * dx, oy + t0 * dy)
    q = Point2(ox + t1 * dx, oy + t1 * dy)
    return Segment(p, q)


def _cross(o: Sequence[float], a: Sequence[float], b: Sequence[float]) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def collinear(p: Point2, q: Point2, r: Point2, eps: float = EPS_GEOM) -> bool:
    ux, uy = q - p
    vx, vy = r - p
    cross = ux * vy - uy * vx
    return abs(cross) <= eps * max(1.0, math.hypot(ux, uy) * math.hypot(vx, vy))


# -- convex hull -------------------------------------------------------------


def convex_hull_indices(coords: Sequence[Sequence[float]]) -> list[int]:
    """QuickHull over ``coords``; returns indices of the strict hull, CCW,
    starting from the lowest-x (then lowest-y) point."""
    n = len(coords)
    if n == 0:
        return []
    pts = [(float(c[0]), float(c[1])) for c in coords]
    order = sorted(range(n), key=lambda i: (pts[i][0], pts[i][1], i))
    lo_i, hi_i = order[0], order[-1]
    if pts[lo_i] == pts[hi_i]:
        return [lo_i]
    extent = max(abs(pts[hi_i][0] - pts[lo_i][0]), max(p[1] for p in pts) - min(p[1] for p in pts))
    tol = 1e-12 * extent * extent

    def outside(a: int, b: int, cand: Iterable[int]) -> list[int]:
        # strictly right of a->b, i.e. outside when walking the hull CCW
        return [i for i in cand if _cross(pts[a], pts[b], pts[i]) < -tol]

    def chain(a: int, b: int, cand: list[int]) -> list[int]:
        if not cand:
            return []
        far = max(cand, key=lambda i: (-_cross(pts[a], pts[b], pts[i]), -i))
        return chain(a, far, outside(a, far, cand)) + [far] + chain(far, b, outside(far, b, cand))

    rest = [i for i in range(n) if i not in (lo_i, hi_i)]
    lower = chain(lo_i, hi_i, outside(lo_i, hi_i, rest))
    upper = chain(hi_i, lo_i, outside(hi_i, lo_i, rest))
    return [lo_i] + lower + [hi_i] + upper


def convex_hull(points: Sequence[Point2]) -> list[Point2]:
    return [points[i] for i in convex_hull_indices([(p.x, p.y) for p in points])]


def polygon_is_convex(poly: Sequence[Point2], eps: float = 1e-12) -> bool:
    """True when every turn of the closed polygon is a left turn (or straight)."""
    n = len(poly)
    if n < 3:
        return True
    scale = max(max(abs(p.x), abs(p.y)) for p in poly) or 1.0
    for k in range(n):
        if _cross(tuple(poly[k]), tuple(poly[(k + 1) % n]), tuple(poly[(k + 2) % n])) < -eps * scale * scale:
            return False
    return True


# -- alpha shapes ------------------------------------------------------------


def _delaunay(coords: np.ndarray) -> np.ndarray:
    if len(coords) < 3:
        raise DegenerateInput("alpha shape needs at least 3 points")
    try:
        tri = Delaunay(coords)
    except QhullError as exc:
        raise DegenerateInput("points are collinear or coincident") from exc
    simplices = tri.simplices.copy()
    a, b, c = (coords[simplices[:, k]] for k in range(3))
    cross = (b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0])
    # qhull leaves zero-area slivers along collinear hull runs; their orientation is noise
    span = float(np.ptp(coords, axis=0).max())
    solid = np.abs(cross) > EPS_GEOM * span * span
    if not solid.any():
        raise DegenerateInput("points are collinear or coincident")
    simplices, cross = simplices[solid], cross[solid]
    # orient every triangle counter-clockwise
    flip = cross < 0
    simplices[flip, 1], simplices[flip, 2] = simplices[flip, 2], simplices[flip, 1].copy()
    return simplices


def _circumradii(coords: np.ndarray, simplices: np.ndarray) -> np.ndarray:
    a, b, c = (coords[simplices[:, k]] for k in range(3))
    la = np.linalg.norm(b - c, axis=1)
    lb = np.linalg.norm(c - a, axis=1)
    lc = np.linalg.norm(a - b, axis=1)
    area2 = np.abs((b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0]))
    with np.errstate(divide="ignore", invalid="ignore"):
        r = la * lb * lc / (2.0 * area2)
    return np.where(area2 > 0, r, np.inf)


def _radius_bound(alpha: float) -> float:
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    return math.inf if alpha == 0 else 1.0 / alpha


def alpha_triangles(points: Sequence[Point2], alpha: float) -> list[tuple[int, int, int]]:
    """Delaunay triangles (CCW index triples) with circumradius <= 1/alpha."""
    coords = np.array([(p.x, p.y) for p in points], dtype=float)
    simplices = _delaunay(coords)
    radii = _circumradii(coords, simplices)
    bound = _radius_bound(alpha)
    keep = radii <= bound * (1 + 1e-12) if math.isfinite(bound) else np.ones(len(radii), bool)
    return sorted(tuple(int(v) for v in s) for s in simplices[keep])


def _triangles_connected(tris: Sequence[tuple[int, int, int]]) -> bool:
    if not tris:
        return False
    by_edge: dict[tuple[int, int], list[int]] = {}
    for t, (a, b, c) in enumerate(tris):
        for u, v in ((a, b), (b, c), (c, a)):
            by_edge.setdefault((min(u, v), max(u, v)), []).append(t)
    seen = {0}
    stack = [0]
    while stack:
        t = stack.pop()
        a, b, c = tris[t]
        for u, v in ((a, b), (b, c), (c, a)):
            for s in by_edge[(min(u, v), max(u, v))]:
                if s not in seen:
                    seen.add(s)
                    stack.append(s)
    return len(seen) == len(tris)


def auto_alpha(points: Sequence[Point2]) -> float:
    """Largest alpha whose kept triangles still form one edge-connected
    region touching every triangulated input point."""
    coords = np.array([(p.x, p.y) for p in points], dtype=float)
    simplices = _delaunay(coords)
    radii = _circumradii(coords, simplices)
    vertices = set(np.unique(simplices).tolist())
    # the kept set only changes at a triangle's circumradius, so scanning those is exact
    for r in np.unique(radii):
        if not math.isfinite(r):
            break
        kept = [tuple(int(v) for v in s) for s in simplices[radii <= r * (1 + 1e-12)]]
        covered = {v for t in kept for v in t}
        if covered == vertices and _triangles_connected(kept):
            return float(1.0 / r)
    return 0.0


def _boundary_loops(coords: np.ndarray, tris: Sequence[tuple[int, int, int]]) -> list[list[int]]:
    directed = set()
    for a, b, c in tris:
        directed.update(((a, b), (b, c), (c, a)))
    boundary = sorted(e for e in directed if (e[1], e[0]) not in directed)
    outgoing: dict[int, list[int]] = {}
    for u, v in boundary:
        outgoing.setdefault(u, []).append(v)
    used: set[tuple[int, int]] = set()
    loops = []
    for start in boundary:
        if start in used:
            continue
        loop = [start[0]]
        u, v = start
        used.add(start)
        while v != loop[0]:
            loop.append(v)
            options = [w for w in outgoing[v] if (v, w) not in used]
            if len(options) > 1:
                # pinch vertex: take the first edge clockwise from the way back
                bx, by = coords[u] - coords[v]
                back = math.atan2(by, bx)

                def cw_angle(w: int) -> float:
                    wx, wy = coords[w] - coords[v]
                    return (back - math.atan2(wy, wx)) % (2 * math.pi)

                options.sort(key=cw_angle)
            w = options[0]
            used.add((v, w))
            u, v = v, w
        loops.append(loop)
    return loops


def _drop_straight_vertices(loop: list[int], coords: np.ndarray) -> list[int]:
    changed = True
    while changed and len(loop) > 3:
        changed = False
        for k in range(len(loop)):
            p, q, r = (coords[loop[(k + j) % len(loop)]] for j in (-1, 0, 1))
            if collinear(Point2(*p), Point2(*q), Point2(*r), 1e-12) and np.dot(q - p, r - q) > 0:
                del loop[k]
                changed = True
                break
    return loop


def _rotate_to_leftmost(loop: list[int], coords: np.ndarray) -> list[int]:
    k = min(range(len(loop)), key=lambda i: (coords[loop[i]][0], coords[loop[i]][1], loop[i]))
    return loop[k:] + loop[:k]


def alpha_shape_indices(points: Sequence[Point2], alpha: Alpha) -> list[list[int]]:
    """Boundary loops of the alpha complex as index lists (outer loops CCW).

    An empty list means no triangle survived the radius filter.
    """
    if alpha == "auto":
        alpha = auto_alpha(points)
    coords = np.array([(p.x, p.y) for p in points], dtype=float)
    tris = alpha_triangles(points, float(alpha))
    loops = [_drop_straight_vertices(lp, coords) for lp in _boundary_loops(coords, tris)]
    return sorted((_rotate_to_leftmost(lp, coords) for lp in loops), key=lambda lp: lp[0])


def alpha_shape(points: Sequence[Point2], alpha: Alpha) -> list[list[Point2]]:
    return [[points[i] for i in loop] for loop in alpha_shape_indices(points, alpha)]


# -- scenic predicate --------------------------------------------------------


def _pairs(reds: Sequence[Point2], blues: Sequence[Point2], mode: Mode) -> list[tuple[Point2, Point2]]:
    if mode == "two_class":
        return [(r, b) for r in reds for b in blues]
    pts = list(reds)
    return [(pts[i], pts[j]) for i in range(len(pts)) for j in range(i + 1, len(pts))]


def scenic_residuals(xy: np.ndarray, reds: Sequence[Point2], blues: Sequence[Point2], mode: Mode = "two_class") -> np.ndarray:
    """Per query point, the smallest | |p-u| - |p-v| | over all eligible pairs."""
    pairs = _pairs(reds, blues, mode)
    xy = np.atleast_2d(np.asarray(xy, dtype=float))
    if not pairs:
        return np.full(len(xy), np.inf)
    u = np.array([tuple(p) for p, _ in pairs])
    v = np.array([tuple(q) for _, q in pairs])
    du = np.linalg.norm(xy[:, None, :] - u[None, :, :], axis=2)
    dv = np.linalg.norm(xy[:, None, :] - v[None, :, :], axis=2)
    return np.abs(du - dv).min(axis=1)


def _diagonal(points: Sequence[Point2]) -> float:
    xs = [p.x for p in points]
    ys = [p.y for p in points]
    return math.hypot(max(xs) - min(xs), max(ys) - min(ys))


def is_scenic(
    p: Point2,
    reds: Sequence[Point2],
    blues: Sequence[Point2],
    eps: float = 1e-6,
    mode: Mode = "two_class",
    scale: float | None = None,
) -> bool:
    """Whether ``p`` is (nearly) equidistant to some eligible pair.

    ``scale`` defaults to the diagonal of the input points' extent.
    """
    if scale is None:
        pts = list(reds) + ([] if mode == "single_class" else list(blues))
        scale = _diagonal(pts) if pts else 1.0
    scale = scale or 1.0
    return bool(scenic_residuals(np.array([[p.x, p.y]]), reds, blues, mode)[0] <= eps * scale)
