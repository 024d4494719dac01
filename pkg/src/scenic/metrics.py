"""Route scoring against the four scenic requirements: only-scenic,
completeness, few direction changes, few repeated edges."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .routes import Route, Walk
from .scenic_graph import PointSet, ScenicGraph
from .geometry import scenic_residuals


@dataclass(frozen=True)
class RouteMetrics:
    scenic_ok: bool
    max_residual: float
    pairs_viewed: int
    completeness: float
    distinct_edge_count: int
    direction_changes: int
    repeated_edge_count: int
    total_length: float
    distinct_length: float

    def to_dict(self) -> dict:
        return asdict(self)


def verify_scenic(
    route: Route,
    g: ScenicGraph,
    ps: PointSet | None = None,
    samples_per_edge: int = 100,
    eps: float = 1e-6,
) -> tuple[bool, float]:
    """Sample every traversed edge and check each sample is scenic.

    Returns (all scenic, worst residual); the residual is in length units and
    the pass threshold is ``eps`` times the bounding-box diagonal.
    """
    ps = ps or g.points
    if not route.edge_multiset:
        return True, 0.0
    t = np.linspace(0.0, 1.0, samples_per_edge)[:, None]
    chunks = []
    for eid in route.edge_ids:
        e = g.edges[eid]
        p = np.array(tuple(g.nodes[e.u].pos))
        q = np.array(tuple(g.nodes[e.v].pos))
        chunks.append(p + t * (q - p))
    res = scenic_residuals(np.vstack(chunks), ps.reds, ps.blues, ps.mode)
    worst = float(res.max())
    return worst <= eps * g.scale, worst


def completeness(route: Route, g: ScenicGraph) -> tuple[int, float]:
    """Pairs whose bisector carries at least one traversed edge, and their share."""
    seen: set[tuple[int, int]] = set()
    for eid in route.edge_multiset:
        seen.update(g.bisectors[g.edges[eid].bisector_id].pairs)
    total = g.points.pair_count
    return len(seen), (len(seen) / total if total else 0.0)


def _walk_changes(g: ScenicGraph, walk: Walk) -> int:
    if not walk:
        return 0
    changes = 0
    for (e1, f1), (e2, f2) in zip(walk, walk[1:]):
        if e1 == e2 or g.edges[e1].bisector_id != g.edges[e2].bisector_id:
            changes += 1
    (e_last, _), (e_first, _) = walk[-1], walk[0]
    # the start of a closed tour counts only as a real corner, never a U-turn
    if len(walk) > 1 and e_last != e_first and g.edges[e_last].bisector_id != g.edges[e_first].bisector_id:
        changes += 1
    return changes


def direction_changes(route: Route, g: ScenicGraph) -> int:
    """Interior walk nodes where the next edge lies on another bisector, or
    where the walk turns back on itself.

    Densest-line routes have no single walk; they score the sum over their
    boundary loops plus one per node where two or more dense lines meet.
    """
    if route.walk:
        return _walk_changes(g, route.walk)
    total = sum(_walk_changes(g, w) for w in route.loop_walks)
    dense = set(route.dense_bisectors)
    for node in g.nodes:
        if len(dense.intersection(node.bisector_ids)) >= 2:
            total += 1
    return total


def repeated_edges(route: Route, g: ScenicGraph) -> list[int]:
    """Route-graph bridges: edges on no cycle, so a closed inspection must walk them twice."""
    adj: dict[int, list[tuple[int, int]]] = {}
    for eid in route.edge_multiset:
        e = g.edges[eid]
        adj.setdefault(e.u, []).append((e.v, eid))
        adj.setdefault(e.v, []).append((e.u, eid))
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    bridges: list[int] = []
    counter = 0
    for root in sorted(adj):
        if root in disc:
            continue
        disc[root] = low[root] = counter
        counter += 1
        # iterative DFS: (node, edge used to enter, neighbour iterator)
        stack = [(root, -1, iter(adj[root]))]
        while stack:
            node, via, it = stack[-1]
            for nxt, eid in it:
                if eid == via:
                    continue
                if nxt in disc:
                    low[node] = min(low[node], disc[nxt])
                else:
                    disc[nxt] = low[nxt] = counter
                    counter += 1
                    stack.append((nxt, eid, iter(adj[nxt])))
                    break
            else:
                stack.pop()
                if stack:
                    parent = stack[-1][0]
                    low[parent] = min(low[parent], low[node])
                    if low[node] > disc[parent]:
                        bridges.append(via)
    return sorted(bridges)


def repeated_edge_count(route: Route, g: ScenicGraph) -> int:
    return len(repeated_edges(route, g))


def summarize(route: Route | None, g: ScenicGraph, ps: PointSet | None = None, eps: float = 1e-6) -> RouteMetrics:
    if route is None or not route.edge_multiset:
        return RouteMetrics(True, 0.0, 0, 0.0, 0, 0, 0, 0.0, 0.0)
    ok, residual = verify_scenic(route, g, ps, eps=eps)
    viewed, ratio = completeness(route, g)
    distinct_length = math.fsum(g.edges[eid].weight for eid in route.edge_multiset)
    return RouteMetrics(
        scenic_ok=ok,
        max_residual=residual,
        pairs_viewed=viewed,
        completeness=ratio,
        distinct_edge_count=len(route.edge_multiset),
        direction_changes=direction_changes(route, g),
        repeated_edge_count=repeated_edge_count(route, g),
        total_length=route.length,
        distinct_length=distinct_length,
    )
