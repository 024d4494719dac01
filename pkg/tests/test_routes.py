import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scenic import (
    EmptyGraph,
    KTooLarge,
    NoCandidate,
    build_graph,
    densest_line,
    endpoints_route,
    floyd_warshall,
    generate_config,
    incremental_expansion,
    min_max_hull,
    min_max_next,
    stitch_path,
)
from scenic.geometry import polygon_is_convex
from scenic.routes import (
    BOUND_TOO_SMALL,
    DEGENERATE_HULL,
    SEED_ONLY,
    Insertion,
    rank_bisectors,
    walk_nodes,
)
from scenic.scenic_graph import ApspTables

from conftest import fixture_a_points, fixture_b_points, four_line_points
from oracles import cheapest_insertion_bruteforce, min_max_bruteforce
from test_scenic_graph import node_id, without_edge

TRIANGLE = 2 + 2 / 3 + math.sqrt(40 / 9)


def closed(g, walk):
    seq = walk_nodes(g, walk)
    return seq[0] == seq[-1]


# --- stitch_path -----------------------------------------------------------


def test_stitch_adjacent_pair(graph_a):
    g, t = graph_a
    walk, length = stitch_path(g, t, [0, 2], closed=False)
    assert len(walk) == 1 and length == pytest.approx(2 / 3)


def test_stitch_triangle(graph_a):
    g, t = graph_a
    seq = [node_id(g, 2, 2), node_id(g, 2, 4), node_id(g, 8 / 3, 2)]
    walk, length = stitch_path(g, t, seq, closed=True)
    assert sorted(eid for eid, _ in walk) == [0, 1, 2]
    assert length == pytest.approx(TRIANGLE, abs=1e-12)
    assert closed(g, walk)


def test_stitch_inserts_intermediate_nodes():
    g = build_graph(fixture_a_points(), delta=10.0)
    a, b, c = node_id(g, 2, 4), node_id(g, 8 / 3, 2), node_id(g, 2, 2)
    g2 = without_edge(g, a, b)
    walk, length = stitch_path(g2, floyd_warshall(g2), [a, b], closed=False)
    assert walk_nodes(g2, walk) == [a, c, b]
    assert length == pytest.approx(8 / 3)


# --- min-max selection -----------------------------------------------------


def test_min_max_next_fixture_a(graph_a):
    g, t = graph_a
    s = [node_id(g, 2, 2), node_id(g, 8 / 3, 2)]
    assert min_max_next(t, s) == node_id(g, 2, 4)


def test_min_max_next_exhausted(graph_a):
    _, t = graph_a
    with pytest.raises(NoCandidate):
        min_max_next(t, [0, 1, 2])


def test_min_max_next_tie_lowest_id():
    # node 0 in the middle, nodes 1 and 2 symmetric around it
    d = np.array([[0.0, 1.0, 1.0], [1.0, 0.0, 2.0], [1.0, 2.0, 0.0]])
    t = ApspTables(d, np.zeros((3, 3), dtype=int))
    assert min_max_next(t, [0]) == 1


# --- min-max hull ----------------------------------------------------------


def test_min_max_hull_full_triangle(graph_a):
    g, t = graph_a
    r = min_max_hull(g, t, bound=10.0)
    assert r.s_nodes == (0, 1, 2)
    assert r.length == pytest.approx(TRIANGLE, abs=1e-9)
    assert r.flags == ()
    assert closed(g, r.walk)


def test_min_max_hull_rollback(graph_a):
    g, t = graph_a
    r = min_max_hull(g, t, bound=4.0)
    assert set(r.s_nodes) == {node_id(g, 2, 2), node_id(g, 8 / 3, 2)}
    assert r.length == pytest.approx(4 / 3)
    assert SEED_ONLY in r.flags
    assert any("rolled back" in n for n in r.notes)


def test_min_max_hull_bound_too_small(graph_a):
    g, t = graph_a
    r = min_max_hull(g, t, bound=1.0)
    assert BOUND_TOO_SMALL in r.flags
    assert r.length == pytest.approx(4 / 3)


def test_min_max_hull_unbounded_exhausts(graph_a):
    g, t = graph_a
    r = min_max_hull(g, t, bound=math.inf)
    assert any("exhausted" in n for n in r.notes)
    assert r.s_nodes == (0, 1, 2)


def test_routes_reject_bad_bound(graph_a):
    g, t = graph_a
    for fn in (min_max_hull, incremental_expansion, endpoints_route):
        with pytest.raises(ValueError):
            fn(g, t, 0.0)


def test_routes_need_edges():
    g = build_graph(fixture_b_points())
    t = floyd_warshall(g)
    with pytest.raises(EmptyGraph):
        min_max_hull(g, t, 10.0)
    with pytest.raises(EmptyGraph):
        densest_line(g, t, 1)


# --- incremental expansion -------------------------------------------------


def test_incremental_triangle(graph_a):
    g, t = graph_a
    r = incremental_expansion(g, t, bound=10.0)
    assert r.s_nodes == (0, 1, 2)
    assert r.length == pytest.approx(TRIANGLE, abs=1e-9)


def test_incremental_rollback(graph_a):
    g, t = graph_a
    r = incremental_expansion(g, t, bound=3.0)
    assert len(r.hull[0]) == 2
    assert SEED_ONLY in r.flags
    assert r.length == pytest.approx(4 / 3)


def test_incremental_square_insertions(graph_square):
    g, t = graph_square
    trace: list[Insertion] = []
    r = incremental_expansion(g, t, bound=math.inf, trace=trace)
    assert len(trace) == len(g.nodes) - 2
    for step in trace[1:]:
        before = [v for v in step.polygon if v != step.node]
        best = cheapest_insertion_bruteforce(t.dist, before, len(g.nodes))
        assert step.cost == pytest.approx(best, abs=1e-9)
    assert r.length == pytest.approx(math.fsum(t.d(a, b) for a, b in zip(r.hull[0], r.hull[0][1:] + r.hull[0][:1])))


# --- endpoints -------------------------------------------------------------


def test_endpoints_triangle(graph_a):
    g, t = graph_a
    r = endpoints_route(g, t, bound=10.0)
    assert r.length == pytest.approx(TRIANGLE, abs=1e-9)
    assert len(r.walk) == 3
    assert closed(g, r.walk)
    x, far, near = node_id(g, 2, 4), node_id(g, 8 / 3, 2), node_id(g, 2, 2)
    # x hangs off the farther seed end (8/3, 2), leaving (2, 4) and (2, 2) as the open ends
    chain = r.hull[0]
    assert {chain[0], chain[-1]} == {x, near}
    assert chain[1] == far
    close = g.edges[r.walk[-1][0]]
    assert close.weight == pytest.approx(2.0)


def test_endpoints_tight_bound(graph_a):
    g, t = graph_a
    r = endpoints_route(g, t, bound=2.0)
    assert r.flags == ()
    assert r.s_nodes == (0, 1, 2)
    assert closed(g, r.walk)


def test_endpoints_single_edge():
    ps = fixture_a_points()
    g = build_graph(ps, delta=10.0)
    lone = without_edge(without_edge(g, 0, 1), 1, 2)
    r = endpoints_route(lone, floyd_warshall(lone), bound=10.0)
    assert r.edge_multiset == {0: 2}


def test_endpoints_bound_too_small(graph_a):
    g, t = graph_a
    r = endpoints_route(g, t, bound=0.5)
    assert BOUND_TOO_SMALL in r.flags


# --- densest line ----------------------------------------------------------


def test_rank_by_span_on_fixture_a(graph_a):
    g, _ = graph_a
    # every bisector carries 2 nodes, so span decides: 3x+y=10 (2.108), then x=2 and y=2
    order = rank_bisectors(g)
    spans = [g.nodes[g.nodes_on(b)[0]].pos.dist(g.nodes[g.nodes_on(b)[-1]].pos) for b in order]
    assert spans[0] == pytest.approx(math.sqrt(40 / 9))
    assert spans == sorted(spans, reverse=True)


def test_densest_all_lines_alpha_zero(graph_a):
    g, t = graph_a
    r = densest_line(g, t, 3, alpha=0.0)
    assert set(r.edge_multiset) == {0, 1, 2}
    assert set(r.hull[0]) == {0, 1, 2}
    assert r.flags == ()


def test_densest_single_line_is_bare_path():
    g = build_graph(four_line_points())
    t = floyd_warshall(g)
    r = densest_line(g, t, 1)
    assert DEGENERATE_HULL in r.flags
    assert len(r.edge_multiset) == 2
    (bid,) = r.dense_bisectors
    assert all(g.edges[e].bisector_id == bid for e in r.edge_multiset)


def test_densest_k_range(graph_a):
    g, t = graph_a
    for k in (0, 4):
        with pytest.raises(KTooLarge):
            densest_line(g, t, k)


def test_densest_auto_alpha_recorded():
    g = build_graph(generate_config(5, 4, 4))
    t = floyd_warshall(g)
    r = densest_line(g, t, 4)
    assert "alpha_used" in r.params


# --- properties ------------------------------------------------------------


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**31 - 1), st.floats(1.0, 200.0))
def test_bounded_routes_respect_bound(seed, bound):
    g = build_graph(generate_config(seed, 3, 3))
    if not g.edges:
        return
    t = floyd_warshall(g)
    for fn in (min_max_hull, incremental_expansion):
        r = fn(g, t, bound)
        if BOUND_TOO_SMALL not in r.flags:
            assert r.length <= bound + 1e-9
        assert closed(g, r.walk)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_min_max_hull_is_convex(seed):
    g = build_graph(generate_config(seed, 3, 3))
    if not g.edges:
        return
    r = min_max_hull(g, floyd_warshall(g), math.inf)
    hull = [g.nodes[i].pos for i in r.hull[0]]
    if len(hull) >= 3:
        assert polygon_is_convex(hull)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**31 - 1), st.data())
def test_min_max_next_matches_bruteforce(seed, data):
    g = build_graph(generate_config(seed, 3, 3))
    n = len(g.nodes)
    if n < 2:
        return
    t = floyd_warshall(g)
    s = data.draw(st.lists(st.integers(0, n - 1), min_size=1, max_size=n - 1, unique=True))
    ref = min_max_bruteforce(t.dist, set(s), n)
    if ref is None:
        with pytest.raises(NoCandidate):
            min_max_next(t, s)
    else:
        assert min_max_next(t, s) == ref
