import time

import pytest

from scenic import Point2, PointSet, build_graph, floyd_warshall


def fixture_a_points() -> PointSet:
    return PointSet([Point2(0, 0)], [Point2(4, 0), Point2(0, 4), Point2(6, 2)])


def fixture_b_points() -> PointSet:
    return PointSet([Point2(0, 0)], [Point2(4, 0), Point2(0, 4), Point2(4, 4)])


def near_square_points() -> PointSet:
    # a square with one corner nudged: exact square corners make every bisector concurrent
    return PointSet([Point2(0, 0), Point2(4, 4)], [Point2(4, 0), Point2(0, 5)])


def four_line_points() -> PointSet:
    # four bisectors with three nodes each, so the densest line carries two edges
    return PointSet([Point2(0, 0)], [Point2(4, 0), Point2(0, 4), Point2(6, 2), Point2(5, 5)])


@pytest.fixture
def graph_a():
    g = build_graph(fixture_a_points(), delta=10.0)
    return g, floyd_warshall(g)


@pytest.fixture
def graph_square():
    g = build_graph(near_square_points())
    return g, floyd_warshall(g)


# -- acceptance report -------------------------------------------------------

SUITE_LIMIT_S = 60.0
ACCEPTANCE: dict[int, tuple[bool, str]] = {}
_START = time.perf_counter()


def record(number: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[number] = (ok, detail)


def pytest_sessionfinish(session, exitstatus):
    elapsed = time.perf_counter() - _START
    session.config._scenic_elapsed = elapsed
    if ACCEPTANCE and elapsed >= SUITE_LIMIT_S and session.exitstatus == 0:
        session.exitstatus = 1


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE:
        return
    elapsed = getattr(config, "_scenic_elapsed", time.perf_counter() - _START)
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {number:2d}: {detail}")
    runtime_ok = elapsed < SUITE_LIMIT_S
    terminalreporter.write_line(
        f"{'PASS' if runtime_ok else 'FAIL'}  suite runtime {elapsed:.1f} s (limit {SUITE_LIMIT_S:.0f} s)"
    )
