"""Scenic route construction over a built graph and its APSP tables.

Every algorithm seeds from the graph's smallest edge and grows the route
greedily; the three bounded ones (min-max hull, incremental expansion,
endpoints) take a length budget ``bound``. Ties anywhere break towards the
lowest node id.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .errors import DegenerateInput, EmptyGraph, KTooLarge, NoCandidate
from .geometry import Alpha, alpha_shape_indices, auto_alpha, collinear, convex_hull_indices
from .scenic_graph import ApspTables, ScenicGraph, shortest_path, smallest_edge

Walk = tuple[tuple[int, bool], ...]

BOUND_TOO_SMALL = "BoundTooSmall"
SEED_ONLY = "SeedOnly"
DEGENERATE_HULL = "DegenerateHull"
NO_SHAPE = "NoShape"

# relative slack when comparing insertion costs for equality
COST_TOL = 1e-12


@dataclass(frozen=True)
class Route:
    """A scenic route G(S, E).

    ``walk`` is a closed tour as (edge id, forward) steps, where forward means
    the edge is traversed from its ``u`` to its ``v``. Densest-line routes are
    not a single tour: their walk is empty and ``loop_walks`` holds one closed
    walk per alpha-shape boundary loop.
    """

    algorithm: str
    params: dict[str, Any]
    s_nodes: tuple[int, ...]
    walk: Walk
    edge_multiset: dict[int, int]
    length: float
    hull: tuple[tuple[int, ...], ...] = ()
    loop_walks: tuple[Walk, ...] = ()
    dense_bisectors: tuple[int, ...] = ()
    flags: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()

    @property
    def edge_ids(self) -> list[int]:
        return sorted(self.edge_multiset)


def _make_route(
    g: ScenicGraph,
    algorithm: str,
    params: dict[str, Any],
    selected: Sequence[int],
    walk: Walk,
    extra_walks: Sequence[Walk] = (),
    extra_edges: Sequence[int] = (),
    **kw: Any,
) -> Route:
    counts: dict[int, int] = {}
    for w in (walk, *extra_walks):
        for eid, _ in w:
            counts[eid] = counts.get(eid, 0) + 1
    for eid in extra_edges:
        counts[eid] = counts.get(eid, 0) + 1
    nodes = set(selected)
    for eid in counts:
        nodes.update((g.edges[eid].u, g.edges[eid].v))
    length = math.fsum(g.edges[eid].weight * c for eid, c in counts.items())
    return Route(
        algorithm=algorithm,
        params=dict(params),
        s_nodes=tuple(sorted(nodes)),
        walk=tuple(walk),
        edge_multiset=dict(sorted(counts.items())),
        length=length,
        loop_walks=tuple(tuple(w) for w in extra_walks),
        **kw,
    )


def walk_nodes(g: ScenicGraph, walk: Walk) -> list[int]:
    """Node sequence visited by ``walk`` (first node repeated at the end if closed)."""
    if not walk:
        return []
    first = g.edges[walk[0][0]]
    seq = [first.u if walk[0][1] else first.v]
    for eid, fwd in walk:
        e = g.edges[eid]
        seq.append(e.v if fwd else e.u)
    return seq


def _path_walk(g: ScenicGraph, path: Sequence[int]) -> list[tuple[int, bool]]:
    steps = []
    for a, b in zip(path, path[1:]):
        e = g.edge_between(a, b)
        assert e is not None, f"APSP hop {a}->{b} is not a graph edge"
        steps.append((e.id, e.u == a))
    return steps


def stitch_path(
    g: ScenicGraph, t: ApspTables, sequence: Sequence[int], closed: bool = True
) -> tuple[Walk, float]:
    """Join consecutive members of ``sequence`` by shortest paths.

    Raises Unreachable if two consecutive members are disconnected.
    """
    seq = list(sequence)
    if closed and len(seq) > 1:
        seq.append(seq[0])
    walk: list[tuple[int, bool]] = []
    for a, b in zip(seq, seq[1:]):
        walk.extend(_path_walk(g, shortest_path(t, a, b)))
    return tuple(walk), math.fsum(g.edges[eid].weight for eid, _ in walk)


def min_max_next(t: ApspTables, s: Sequence[int], candidates: Sequence[int] | None = None) -> int:
    """argmin over x outside ``s`` of max over a in ``s`` of d(x, a).

    Candidates at infinite distance from any member of ``s`` are skipped.
    """
    members = sorted(set(s))
    if not members:
        raise ValueError("S must be non-empty")
    n = t.dist.shape[0]
    pool = np.array(sorted(set(range(n) if candidates is None else candidates) - set(members)), dtype=int)
    if pool.size:
        score = t.dist[np.ix_(pool, members)].max(axis=1)
        finite = np.isfinite(score)
        if finite.any():
            pool, score = pool[finite], score[finite]
            # argmin returns the first minimum, and pool is sorted by id
            return int(pool[int(np.argmin(score))])
    raise NoCandidate("no reachable node left outside S")


def _cycle_length(t: ApspTables, cycle: Sequence[int]) -> float:
    if len(cycle) < 2:
        return 0.0
    return math.fsum(t.d(a, b) for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]]))


def _seed(g: ScenicGraph) -> tuple[int, int, float]:
    e = smallest_edge(g)
    return e.u, e.v, e.weight


def min_max_hull(g: ScenicGraph, t: ApspTables, bound: float) -> Route:
    """Grow S by the min-max rule while the APSP length of conv(S) fits ``bound``.

    The point whose hull would overshoot is rolled back, so an unflagged
    route's length never exceeds the bound.
    """
    if bound <= 0:
        raise ValueError("bound must be positive")
    a, b, w = _seed(g)
    params = {"bound": bound}
    s = [a, b]
    hull = [a, b]
    flags: list[str] = []
    notes: list[str] = []
    if 2 * w > bound:
        flags.append(BOUND_TOO_SMALL)
        notes.append(f"seed edge out-and-back ({2 * w!r}) already exceeds bound {bound!r}")
    else:
        while True:
            try:
                x = min_max_next(t, s)
            except NoCandidate:
                notes.append("stopped: candidates exhausted")
                break
            trial = s + [x]
            pos = [tuple(g.nodes[i].pos) for i in trial]
            trial_hull = [trial[i] for i in convex_hull_indices(pos)]
            length = _cycle_length(t, trial_hull)
            if length > bound:
                notes.append(f"rolled back node {x}: hull length {length!r} > bound {bound!r}")
                break
            s, hull = trial, trial_hull
        if len(s) == 2:
            flags.append(SEED_ONLY)
    walk, _ = stitch_path(g, t, hull, closed=True)
    return _make_route(g, "min_max_hull", params, s, walk, hull=(tuple(hull),), flags=tuple(flags), notes=tuple(notes))


@dataclass
class Insertion:
    """One accepted incremental-expansion step (kept for inspection/tests)."""

    node: int
    edge: tuple[int, int]
    cost: float
    best_cost: float
    resolved: bool = False
    polygon: tuple[int, ...] = field(default=())


def _insertion_options(
    t: ApspTables, outside: np.ndarray, edges: list[tuple[int, int]], tol: float
) -> list[tuple[float, int, int]]:
    """(cost, x, edge index) options within ``tol`` of the cheapest, sorted by cost then ids."""
    if not outside.size:
        return []
    p = np.array([e[0] for e in edges])
    q = np.array([e[1] for e in edges])
    # cost[k, j]: insert outside[j] into edge k
    cost = t.dist[p][:, outside] + t.dist[q][:, outside] - t.dist[p, q][:, None]
    finite = np.isfinite(cost)
    if not finite.any():
        return []
    best = cost[finite].min()
    ks, js = np.nonzero(finite & (cost <= best + tol))
    options = [(float(cost[k, j]), int(outside[j]), int(k)) for k, j in zip(ks, js)]
    options.sort()
    return options


def incremental_expansion(
    g: ScenicGraph, t: ApspTables, bound: float, trace: list[Insertion] | None = None
) -> Route:
    """Cheapest-insertion growth of a closed polygon over S.

    Each step inserts the node and outer edge [p, q] minimising
    d(x,p) + d(x,q) - d(p,q). When x lies on the line through p and q the
    insertion is degenerate; an equally cheap alternative is preferred (x
    paired with p's other polygon neighbour, or another minimal option), but
    the cost of an accepted insertion is never raised above the minimum.
    Pass a list as ``trace`` to collect the accepted insertions.
    """
    if bound <= 0:
        raise ValueError("bound must be positive")
    a, b, w = _seed(g)
    params = {"bound": bound}
    poly = [a, b]
    dist_d = w
    flags: list[str] = []
    notes: list[str] = []
    n = len(g.nodes)
    pos = [g.nodes[i].pos for i in range(n)]
    ceps = g.eps

    if 2 * w > bound:
        flags.append(BOUND_TOO_SMALL)
        notes.append(f"seed edge out-and-back ({2 * w!r}) already exceeds bound {bound!r}")
    while dist_d <= bound and not flags:
        outside = np.array(sorted(set(range(n)) - set(poly)), dtype=int)
        if len(poly) == 2:
            score = t.dist[outside, a] + t.dist[outside, b] if outside.size else np.array([])
            ok = np.isfinite(score)
            if not ok.any():
                notes.append("stopped: candidates exhausted")
                break
            x = int(outside[ok][int(np.argmin(score[ok]))])
            new_d = dist_d + t.d(a, x) + t.d(x, b)
            if new_d > bound:
                notes.append(f"rolled back node {x}: length {new_d!r} > bound {bound!r}")
                break
            poly = [a, x, b]
            if trace is not None:
                cost = t.d(a, x) + t.d(x, b)
                trace.append(Insertion(x, (a, b), cost, cost, polygon=tuple(poly)))
            dist_d = new_d
            continue

        edges = [(poly[k], poly[(k + 1) % len(poly)]) for k in range(len(poly))]
        tol = COST_TOL * max(g.scale, 1.0)
        options = _insertion_options(t, outside, edges, tol)
        if not options:
            notes.append("stopped: candidates exhausted")
            break
        best_cost = options[0][0]
        limit = best_cost + tol
        choice = None
        for rank, (cost, x, k) in enumerate(options):
            if cost > limit:
                break
            p, q = edges[k]
            if t.d(x, q) < t.d(x, p):
                p, q = q, p
            if not collinear(pos[x], pos[p], pos[q], ceps):
                choice = (x, p, q, cost, rank > 0)
                break
            # pair x with p's other neighbour so the replaced edge stays on the polygon
            i = poly.index(p)
            before, after = poly[(i - 1) % len(poly)], poly[(i + 1) % len(poly)]
            r = after if before == q else before
            alt = t.d(p, x) + t.d(x, r) - t.d(p, r)
            if r != q and alt <= limit and not collinear(pos[x], pos[p], pos[r], ceps):
                choice = (x, p, r, alt, True)
                break
        if choice is None:
            cost, x, k = options[0]
            p, q = edges[k]
            choice = (x, p, q, cost, False)
            notes.append(f"node {x}: cheapest insertion is collinear with edge {edges[k]}; inserted as is")
        x, p, q, cost, resolved = choice
        new_d = dist_d + cost
        if new_d > bound:
            notes.append(f"rolled back node {x}: length {new_d!r} > bound {bound!r}")
            break
        i, j = poly.index(p), poly.index(q)
        if (i + 1) % len(poly) == j:
            poly.insert(i + 1, x)
        else:
            poly.insert(j + 1, x)
        dist_d = new_d
        if trace is not None:
            trace.append(Insertion(x, (p, q), cost, best_cost, resolved, tuple(poly)))

    if len(poly) == 2 and not flags:
        flags.append(SEED_ONLY)
    walk, _ = stitch_path(g, t, poly, closed=True)
    return _make_route(
        g, "incremental_expansion", params, poly, walk, hull=(tuple(poly),), flags=tuple(flags), notes=tuple(notes)
    )


def endpoints_route(g: ScenicGraph, t: ApspTables, bound: float) -> Route:
    """Grow an open walk from the seed edge, always extending the end farther
    from the new node, then close it between its two ends.

    The loop test ``D + d(end0, end1) <= bound`` excludes the seed edge from D;
    the reported length is the full traversal, seed edge included.
    """
    if bound <= 0:
        raise ValueError("bound must be positive")
    a, b, w = _seed(g)
    params = {"bound": bound}
    chain = [a, b]
    selected = {a, b}
    dist_d = 0.0
    flags: list[str] = []
    notes: list[str] = []
    if dist_d + w > bound:
        flags.append(BOUND_TOO_SMALL)
        notes.append(f"seed edge ({w!r}) already exceeds bound {bound!r}")
    else:
        while dist_d + t.d(chain[0], chain[-1]) <= bound:
            ends = sorted({chain[0], chain[-1]})
            try:
                x = _endpoint_candidate(t, selected, ends)
            except NoCandidate:
                notes.append("stopped: candidates exhausted")
                break
            # farther end; ties to the lower id
            p = max(ends, key=lambda e: (t.d(x, e), -e))
            leg = shortest_path(t, p, x)
            if p == chain[-1]:
                chain.extend(leg[1:])
            else:
                chain[:0] = leg[::-1][:-1]
            selected.add(x)
            dist_d += t.d(p, x)
        closing = t.d(chain[-1], chain[0])
        notes.append(f"bound accounting D={dist_d + closing!r} (seed edge excluded)")

    if flags:
        walk, _ = stitch_path(g, t, [a, b], closed=True)
    else:
        open_walk = _path_walk(g, chain)
        close = _path_walk(g, shortest_path(t, chain[-1], chain[0])) if chain[0] != chain[-1] else []
        walk = tuple(open_walk + close)
    return _make_route(
        g, "endpoints", params, sorted(selected), walk, hull=(tuple(chain),), flags=tuple(flags), notes=tuple(notes)
    )


def _endpoint_candidate(t: ApspTables, selected: set[int], ends: Sequence[int]) -> int:
    n = t.dist.shape[0]
    pool = np.array(sorted(set(range(n)) - selected), dtype=int)
    if pool.size:
        score = t.dist[np.ix_(pool, list(ends))].max(axis=1)
        ok = np.isfinite(score)
        if ok.any():
            return int(pool[ok][int(np.argmin(score[ok]))])
    raise NoCandidate("no reachable node left")


def rank_bisectors(g: ScenicGraph) -> list[int]:
    """Bisector ids by node count, then extreme-node span, both descending."""

    def key(bid: int) -> tuple[int, float, int]:
        on = g.nodes_on(bid)
        span = g.nodes[on[0]].pos.dist(g.nodes[on[-1]].pos) if len(on) >= 2 else 0.0
        return (-len(on), -span, bid)

    return sorted((b.id for b in g.bisectors), key=key)


def densest_line(g: ScenicGraph, t: ApspTables, k: int, alpha: Alpha = "auto") -> Route:
    """The ``k`` bisectors with most nodes, joined by an alpha shape over their
    extreme nodes. The result is a route graph rather than a single tour."""
    if not g.edges:
        raise EmptyGraph("the scenic graph has no edges")
    if k < 1 or k > len(g.bisectors):
        raise KTooLarge(f"k={k} outside 1..{len(g.bisectors)}")
    dense = rank_bisectors(g)[:k]
    params: dict[str, Any] = {"k": k, "alpha": alpha}
    flags: list[str] = []
    notes: list[str] = []
    dense_edges = [e.id for e in g.edges if e.bisector_id in dense]
    far: list[int] = []
    for bid in dense:
        on = g.nodes_on(bid)
        if len(on) < 2:
            notes.append(f"bisector {bid} has {len(on)} node(s); contributes no edges")
        for v in (on[0], on[-1]) if on else ():
            if v not in far:
                far.append(v)
    far.sort()

    loops: list[tuple[int, ...]] = []
    loop_walks: list[Walk] = []
    pts = [g.nodes[i].pos for i in far]
    try:
        if alpha == "auto":
            chosen = auto_alpha(pts)
            params["alpha_used"] = chosen
        else:
            chosen = float(alpha)
        raw = alpha_shape_indices(pts, chosen)
    except DegenerateInput:
        flags.append(DEGENERATE_HULL)
        hull = [far[i] for i in convex_hull_indices([tuple(p) for p in pts])]
        loops = [tuple(hull)]
        notes.append("endpoint set is degenerate; fell back to its convex hull (a segment), not stitched")
    else:
        if not raw:
            flags.append(NO_SHAPE)
            notes.append("no triangle survives the alpha filter")
        for lp in raw:
            ids = tuple(far[i] for i in lp)
            loops.append(ids)
            walk, _ = stitch_path(g, t, ids, closed=True)
            loop_walks.append(walk)
        missing = sorted(set(far) - {v for lp in loops for v in lp})
        if missing:
            notes.append(f"endpoints not on the alpha shape: {missing}")
    return _make_route(
        g,
        "densest_line",
        params,
        far,
        (),
        extra_walks=loop_walks,
        extra_edges=dense_edges,
        hull=tuple(loops),
        dense_bisectors=tuple(dense),
        flags=tuple(flags),
        notes=tuple(notes),
    )


ALGORITHMS = ("densest_line", "min_max_hull", "incremental_expansion", "endpoints")
