import json
import math

import pytest

from scenic import (
    ParseError,
    Point2,
    PointSet,
    RunConfig,
    ValidationError,
    generate_config,
    read_route_json,
    run_pipeline,
    write_route_json,
)
from scenic.app import dumps, parse_points, parse_points_file, project_lonlat, report_to_dict, route_json
from scenic.cli import main
from scenic.svg import render_svg_text

from conftest import fixture_a_points, fixture_b_points
from oracles import haversine

TRIANGLE = 2 + 2 / 3 + math.sqrt(40 / 9)
FIXTURE_A = {"red": [[0, 0]], "blue": [[4, 0], [0, 4], [6, 2]]}


# --- ingestion -------------------------------------------------------------


def test_parse_two_class():
    assert parse_points(FIXTURE_A) == fixture_a_points()


def test_parse_single_class():
    ps = parse_points({"points": [[0, 0], [2, 0], [1, 5]]})
    assert ps.mode == "single_class" and len(ps.reds) == 3 and ps.blues == ()


def test_parse_unknown_key_is_named():
    with pytest.raises(ParseError) as info:
        parse_points({"red": [[0, 0]], "blu": [[1, 1]]})
    assert info.value.field == "blu"
    assert "blu" in str(info.value)


def test_parse_bad_coordinate_names_field():
    with pytest.raises(ParseError) as info:
        parse_points({"red": [[0, 0]], "blue": [[1, "x"]]})
    assert info.value.field == "blue[0]"


def test_parse_missing_colour():
    with pytest.raises(ParseError) as info:
        parse_points({"red": [[0, 0]]})
    assert info.value.field == "blue"


def test_parse_file_reports_line(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "red": [[0, 0]],\n  "blue": [[1, 1]\n}\n')
    with pytest.raises(ParseError) as info:
        parse_points_file(path)
    assert info.value.line is not None


def test_lonlat_projection_distances():
    # a ~2 km patch; local projection distances agree with great-circle distances
    pts = [(121.00, 14.60), (121.015, 14.605), (121.007, 14.59), (120.995, 14.612)]
    xy = project_lonlat(pts)
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            planar = math.dist(xy[i], xy[j])
            ref = haversine(*pts[i], *pts[j])
            assert abs(planar - ref) / ref < 0.005


def test_parse_lonlat():
    ps = parse_points({"crs": "lonlat", "red": [[121.0, 14.6]], "blue": [[121.01, 14.6]]})
    assert ps.reds[0].dist(ps.blues[0]) == pytest.approx(haversine(121.0, 14.6, 121.01, 14.6), rel=0.005)


# --- generator -------------------------------------------------------------


def test_generate_deterministic():
    a, b = generate_config(1, 4, 4), generate_config(1, 4, 4)
    assert a == b
    assert len(a.reds) == 4 and len(a.blues) == 4


def test_generate_seed_changes_set():
    assert generate_config(1, 4, 4) != generate_config(2, 4, 4)


def test_generate_in_extent():
    ps = generate_config(9, 5, 5, extent=3.0)
    assert all(0 <= c <= 3.0 for p in ps.all_points for c in p)


# --- pipeline --------------------------------------------------------------


def test_pipeline_fixture_a():
    rep = run_pipeline(RunConfig("min_max_hull", bound=10.0, delta=10.0), fixture_a_points())
    assert rep.status == "ok"
    assert rep.metrics.total_length == pytest.approx(TRIANGLE)
    assert rep.metrics.completeness == 1.0


def test_pipeline_fixture_b_empty():
    rep = run_pipeline(RunConfig("min_max_hull", bound=10.0), fixture_b_points())
    assert rep.status == "empty_graph"
    assert rep.route is None and len(rep.graph.nodes) == 1


def test_pipeline_validation():
    with pytest.raises(ValidationError):
        run_pipeline(RunConfig("densest_line"), fixture_a_points())
    with pytest.raises(ValidationError):
        run_pipeline(RunConfig("endpoints"), fixture_a_points())
    with pytest.raises(ValidationError):
        run_pipeline(RunConfig("zigzag", bound=1.0), fixture_a_points())


def test_pipeline_ignored_param_warns():
    rep = run_pipeline(RunConfig("min_max_hull", bound=10.0, k=2), fixture_a_points())
    assert any("k is ignored" in w for w in rep.warnings)


def test_pipeline_single_class_override():
    rep = run_pipeline(RunConfig("min_max_hull", bound=100.0, mode="single_class"), generate_config(4, 3, 3))
    assert rep.graph.points.mode == "single_class"
    assert rep.graph.points.pair_count == 15
    assert rep.metrics.scenic_ok


# --- JSON ------------------------------------------------------------------


def test_dumps_floats_and_infinity():
    text = dumps({"a": 0.1, "b": math.inf, "c": [1, 2]})
    assert json.loads(text) == {"a": 0.1, "b": "inf", "c": [1, 2]}


def test_report_round_trip(tmp_path):
    rep = run_pipeline(RunConfig("densest_line", k=3, alpha=0.0, delta=10.0), fixture_a_points())
    path = tmp_path / "r.json"
    write_route_json(rep, path)
    back = read_route_json(path)
    assert back.graph == rep.graph
    assert back.route == rep.route
    assert back.metrics == rep.metrics
    assert report_to_dict(back) == report_to_dict(rep)


def test_json_counts_fixture_a():
    rep = run_pipeline(RunConfig("min_max_hull", bound=10.0, delta=10.0), fixture_a_points())
    d = json.loads(route_json(rep))
    assert len(d["graph"]["nodes"]) == 3 and len(d["graph"]["edges"]) == 3


def test_unbounded_route_round_trip(tmp_path):
    rep = run_pipeline(RunConfig("incremental_expansion", bound=math.inf), generate_config(2, 3, 3))
    path = tmp_path / "inf.json"
    write_route_json(rep, path)
    assert read_route_json(path).route.params["bound"] == math.inf


# --- SVG -------------------------------------------------------------------


def test_svg_fixture_a():
    rep = run_pipeline(RunConfig("min_max_hull", bound=10.0, delta=10.0), fixture_a_points())
    svg = render_svg_text(rep)
    assert svg.count('stroke="#2ca02c"') == 3
    assert svg.count("data-edge=") == 3
    assert 'class="repeated"' not in svg


def test_svg_empty_graph():
    rep = run_pipeline(RunConfig("min_max_hull", bound=10.0), fixture_b_points())
    svg = render_svg_text(rep)
    assert svg.count("data-bisector=") == 3
    assert "data-edge=" not in svg
    assert svg.count('fill="red"') == 1 and svg.count('fill="blue"') == 3


def test_svg_marks_bridges():
    ps = PointSet([Point2(0, 0)], [Point2(4, 0), Point2(0, 4), Point2(6, 2), Point2(5, 5)])
    rep = run_pipeline(RunConfig("densest_line", k=1), ps)
    assert render_svg_text(rep).count('class="repeated"') == 2


# --- CLI -------------------------------------------------------------------


@pytest.fixture
def points_file(tmp_path):
    path = tmp_path / "a.json"
    path.write_text(json.dumps(FIXTURE_A))
    return path


def test_cli_route_outputs(tmp_path, points_file):
    out_json, out_svg = tmp_path / "r.json", tmp_path / "r.svg"
    argv = ["route", "--input", str(points_file), "--algorithm", "min_max_hull", "--bound", "10", "--delta", "10"]
    assert main(argv + ["--out-json", str(out_json), "--out-svg", str(out_svg)]) == 0
    d = json.loads(out_json.read_text())
    assert d["route"]["length"] == pytest.approx(TRIANGLE)
    assert out_svg.read_text().startswith("<?xml")


def test_cli_render_matches_route_svg(tmp_path, points_file):
    out_json, out_svg, again = tmp_path / "r.json", tmp_path / "r.svg", tmp_path / "again.svg"
    main(["route", "--input", str(points_file), "--algorithm", "endpoints", "--bound", "10",
          "--out-json", str(out_json), "--out-svg", str(out_svg)])
    assert main(["render", "--input", str(out_json), "--out-svg", str(again)]) == 0
    assert again.read_bytes() == out_svg.read_bytes()


def test_cli_gen(tmp_path):
    out = tmp_path / "g.json"
    assert main(["gen", "--seed", "3", "--out", str(out)]) == 0
    assert parse_points_file(out) == generate_config(3, 4, 4)


def test_cli_exit_codes(tmp_path, points_file, capsys):
    assert main(["route", "--input", str(points_file), "--algorithm", "densest_line"]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"red": [[0, 0]], "colour": []}')
    assert main(["build", "--input", str(bad)]) == 2
    b = tmp_path / "b.json"
    b.write_text(json.dumps({"red": [[0, 0]], "blue": [[4, 0], [0, 4], [4, 4]]}))
    assert main(["build", "--input", str(b)]) == 3
    assert main(["build", "--input", str(tmp_path / "missing.json")]) == 4
    with pytest.raises(SystemExit) as info:
        main(["route", "--input", str(points_file), "--algorithm", "nope"])
    assert info.value.code == 2
    capsys.readouterr()
