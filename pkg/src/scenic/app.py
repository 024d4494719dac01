"""Point ingestion, random instances, the end-to-end pipeline and the JSON
report format."""

from __future__ import annotations

import json
import math
import os
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Any, Sequence

import numpy as np

from .errors import EmptyGraph, ParseError, ValidationError
from .geometry import EPS_GEOM, BoundingBox, LineStd, Point2, Segment
from .metrics import RouteMetrics, summarize
from .routes import ALGORITHMS, Route, densest_line, endpoints_route, incremental_expansion, min_max_hull
from .scenic_graph import (
    Bisector,
    IntersectionNode,
    PointSet,
    ScenicEdge,
    ScenicGraph,
    build_graph,
    floyd_warshall,
)

EARTH_RADIUS_M = 6_371_008.8
SCHEMA_VERSION = 1

_POINT_KEYS = {"mode", "red", "blue", "points", "crs"}


# -- input -------------------------------------------------------------------


def project_lonlat(lonlat: Sequence[tuple[float, float]]) -> list[tuple[float, float]]:
    """Local equirectangular projection (metres) about the centroid."""
    lon0 = sum(p[0] for p in lonlat) / len(lonlat)
    lat0 = sum(p[1] for p in lonlat) / len(lonlat)
    k = math.cos(math.radians(lat0))
    return [
        (EARTH_RADIUS_M * math.radians(lon - lon0) * k, EARTH_RADIUS_M * math.radians(lat - lat0))
        for lon, lat in lonlat
    ]


def _coords(raw: Any, name: str) -> list[tuple[float, float]]:
    if not isinstance(raw, list):
        raise ParseError("expected a list of [x, y] pairs", field=name)
    out = []
    for i, item in enumerate(raw):
        ok = (
            isinstance(item, list)
            and len(item) == 2
            and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in item)
            and all(math.isfinite(v) for v in item)
        )
        if not ok:
            raise ParseError("expected two finite numbers", field=f"{name}[{i}]")
        out.append((float(item[0]), float(item[1])))
    return out


def parse_points(data: Any) -> PointSet:
    if not isinstance(data, dict):
        raise ParseError("top level must be a JSON object")
    for key in data:
        if key not in _POINT_KEYS:
            raise ParseError(f"unknown key {key!r}", field=key)
    crs = data.get("crs", "planar")
    if crs not in ("planar", "lonlat"):
        raise ParseError(f"unknown crs {crs!r}", field="crs")
    if "points" in data:
        if "red" in data or "blue" in data:
            raise ParseError("'points' cannot be combined with 'red'/'blue'", field="points")
        mode = data.get("mode", "single_class")
        if mode != "single_class":
            raise ParseError("'points' implies single_class mode", field="mode")
        groups = [_coords(data["points"], "points")]
    else:
        mode = data.get("mode", "two_class")
        if mode == "two_class":
            for key in ("red", "blue"):
                if key not in data:
                    raise ParseError("missing required key", field=key)
            groups = [_coords(data["red"], "red"), _coords(data["blue"], "blue")]
        elif mode == "single_class":
            groups = [_coords(data.get("red", []), "red") + _coords(data.get("blue", []), "blue")]
        else:
            raise ParseError(f"unknown mode {mode!r}", field="mode")
    if crs == "lonlat":
        flat = project_lonlat([p for grp in groups for p in grp])
        it = iter(flat)
        groups = [[next(it) for _ in grp] for grp in groups]
    pts = [tuple(Point2(x, y) for x, y in grp) for grp in groups]
    if mode == "single_class":
        return PointSet(pts[0], (), "single_class")
    return PointSet(pts[0], pts[1], "two_class")


def parse_points_file(path: str | os.PathLike) -> PointSet:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from exc
    return parse_points(data)


def points_to_dict(ps: PointSet) -> dict[str, Any]:
    if ps.mode == "single_class":
        return {"mode": ps.mode, "points": [[p.x, p.y] for p in ps.reds]}
    return {"mode": ps.mode, "red": [[p.x, p.y] for p in ps.reds], "blue": [[p.x, p.y] for p in ps.blues]}


def generate_config(
    seed: int, n_red: int, n_blue: int, extent: float = 10.0, mode: str = "two_class"
) -> PointSet:
    """Uniform random points in [0, extent]^2 from numpy's PCG64 generator."""
    if n_red < 1 or (mode == "two_class" and n_blue < 1):
        raise ValidationError("point counts must be >= 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    n_blue = n_blue if mode == "two_class" else 0
    xy = rng.uniform(0.0, extent, size=(n_red + n_blue, 2))
    reds = tuple(Point2(*p) for p in xy[:n_red])
    blues = tuple(Point2(*p) for p in xy[n_red:])
    return PointSet(reds, blues, mode)  # type: ignore[arg-type]


# -- pipeline ----------------------------------------------------------------


@dataclass(frozen=True)
class RunConfig:
    algorithm: str | None = "min_max_hull"
    mode: str | None = None
    delta: float | None = None
    k: int | None = None
    bound: float | None = None
    alpha: float | str = "auto"
    seed: int = 0
    eps: float = EPS_GEOM
    scenic_eps: float = 1e-6
    input: str | None = None
    out_json: str | None = None
    out_svg: str | None = None

    def validate(self) -> list[str]:
        """Raise ValidationError for missing parameters; return warnings for ignored ones."""
        if self.mode not in (None, "two_class", "single_class"):
            raise ValidationError(f"unknown mode {self.mode!r}")
        if self.algorithm is not None and self.algorithm not in ALGORITHMS:
            raise ValidationError(f"unknown algorithm {self.algorithm!r}; expected one of {ALGORITHMS}")
        if self.alpha != "auto" and not (isinstance(self.alpha, (int, float)) and self.alpha >= 0):
            raise ValidationError("alpha must be 'auto' or a non-negative number")
        notes = []
        if self.algorithm == "densest_line":
            if self.k is None:
                raise ValidationError("densest_line needs k")
            if self.bound is not None:
                notes.append("bound is ignored by densest_line")
        elif self.algorithm is not None:
            if self.bound is None:
                raise ValidationError(f"{self.algorithm} needs bound")
            if not self.bound > 0:
                raise ValidationError("bound must be positive")
            if self.k is not None:
                notes.append(f"k is ignored by {self.algorithm}")
            if self.alpha != "auto":
                notes.append(f"alpha is ignored by {self.algorithm}")
        return notes


@dataclass(frozen=True)
class RouteReport:
    config: RunConfig
    graph: ScenicGraph
    route: Route | None
    metrics: RouteMetrics | None
    status: str = "ok"
    warnings: tuple[str, ...] = field(default=())

    def summary(self) -> dict[str, int]:
        return self.graph.summary()


def _as_single_class(ps: PointSet) -> PointSet:
    if ps.mode == "single_class":
        return ps
    return PointSet(ps.reds + ps.blues, (), "single_class")


def run_pipeline(cfg: RunConfig, points: PointSet | None = None) -> RouteReport:
    notes = cfg.validate()
    if points is None:
        if cfg.input is None:
            raise ValidationError("no input points: pass a PointSet or set cfg.input")
        points = parse_points_file(cfg.input)
    if cfg.mode == "single_class":
        points = _as_single_class(points)
    elif cfg.mode == "two_class" and points.mode == "single_class":
        raise ValidationError("input holds single_class points but mode is two_class")
    g = build_graph(points, cfg.delta, cfg.eps)
    if not g.edges:
        return RouteReport(cfg, g, None, None, "empty_graph", tuple(notes))
    if cfg.algorithm is None:
        return RouteReport(cfg, g, None, None, "ok", tuple(notes))
    t = floyd_warshall(g)
    try:
        if cfg.algorithm == "densest_line":
            route = densest_line(g, t, int(cfg.k), cfg.alpha)  # type: ignore[arg-type]
        elif cfg.algorithm == "min_max_hull":
            route = min_max_hull(g, t, float(cfg.bound))  # type: ignore[arg-type]
        elif cfg.algorithm == "incremental_expansion":
            route = incremental_expansion(g, t, float(cfg.bound))  # type: ignore[arg-type]
        else:
            route = endpoints_route(g, t, float(cfg.bound))  # type: ignore[arg-type]
    except EmptyGraph:
        return RouteReport(cfg, g, None, None, "empty_graph", tuple(notes))
    metrics = summarize(route, g, points, cfg.scenic_eps)
    return RouteReport(cfg, g, route, metrics, "ok", tuple(notes))


# -- JSON --------------------------------------------------------------------


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    text = format(x, ".17g")
    if not any(c in text for c in ".e"):
        text += ".0"
    return text


def dumps(obj: Any, indent: int = 0) -> str:
    """JSON text with every float written at 17 significant digits."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float)) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = (pad + json.dumps(str(k)) + ": " + dumps(v, indent + 1) for k, v in obj.items())
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _f(v: Any) -> float:
    return float(v)


def _config_to_dict(cfg: RunConfig) -> dict[str, Any]:
    d = asdict(cfg)
    for key in ("delta", "bound", "eps", "scenic_eps"):
        if d[key] is not None:
            d[key] = float(d[key])
    if d["alpha"] != "auto":
        d["alpha"] = float(d["alpha"])
    return d


def _config_from_dict(d: dict[str, Any]) -> RunConfig:
    known = {f.name for f in fields(RunConfig)}
    extra = set(d) - known
    if extra:
        raise ParseError(f"unknown config keys {sorted(extra)}", field="config")
    cfg = RunConfig(**d)
    conv: dict[str, Any] = {"eps": _f(cfg.eps), "scenic_eps": _f(cfg.scenic_eps)}
    for key in ("delta", "bound"):
        if getattr(cfg, key) is not None:
            conv[key] = _f(getattr(cfg, key))
    if cfg.alpha != "auto":
        conv["alpha"] = _f(cfg.alpha)
    return replace(cfg, **conv)


def _graph_to_dict(g: ScenicGraph) -> dict[str, Any]:
    return {
        "box": {"min": [g.box.min.x, g.box.min.y], "max": [g.box.max.x, g.box.max.y], "delta": g.box.delta},
        "eps": g.eps,
        "bisectors": [
            {
                "id": b.id,
                "line": [b.line.a, b.line.b, b.line.c],
                "pairs": [list(p) for p in b.pairs],
                "clip": [[b.clip.p.x, b.clip.p.y], [b.clip.q.x, b.clip.q.y]],
            }
            for b in g.bisectors
        ],
        "nodes": [{"id": n.id, "x": n.pos.x, "y": n.pos.y, "bisectors": list(n.bisector_ids)} for n in g.nodes],
        "edges": [{"id": e.id, "u": e.u, "v": e.v, "w": e.weight, "bisector": e.bisector_id} for e in g.edges],
        "warnings": list(g.warnings),
    }


def _graph_from_dict(d: dict[str, Any], ps: PointSet) -> ScenicGraph:
    box = BoundingBox(Point2(*map(_f, d["box"]["min"])), Point2(*map(_f, d["box"]["max"])), _f(d["box"]["delta"]))
    bisectors = []
    for b in d["bisectors"]:
        a, bb, c = map(_f, b["line"])
        # stored lines are already canonical; rebuild them bit-exact
        line = LineStd(a, bb, c)
        (px, py), (qx, qy) = b["clip"]
        bisectors.append(
            Bisector(int(b["id"]), line, tuple(tuple(p) for p in b["pairs"]), Segment(Point2(px, py), Point2(qx, qy)))
        )
    nodes = tuple(IntersectionNode(int(n["id"]), Point2(n["x"], n["y"]), tuple(n["bisectors"])) for n in d["nodes"])
    edges = tuple(ScenicEdge(int(e["id"]), int(e["u"]), int(e["v"]), _f(e["w"]), int(e["bisector"])) for e in d["edges"])
    return ScenicGraph(ps, box, tuple(bisectors), nodes, edges, _f(d["eps"]), tuple(d.get("warnings", ())))


def _param_to_json(v: Any) -> Any:
    return float(v) if isinstance(v, (int, float)) and not isinstance(v, bool) else v


def _route_to_dict(r: Route) -> dict[str, Any]:
    params = {k: _param_to_json(v) for k, v in r.params.items()}
    if "k" in r.params:
        params["k"] = int(r.params["k"])
    return {
        "algorithm": r.algorithm,
        "params": params,
        "s_nodes": list(r.s_nodes),
        "walk": [[eid, fwd] for eid, fwd in r.walk],
        "edge_multiset": [[eid, c] for eid, c in r.edge_multiset.items()],
        "length": r.length,
        "hull": [list(h) for h in r.hull],
        "loop_walks": [[[eid, fwd] for eid, fwd in w] for w in r.loop_walks],
        "dense_bisectors": list(r.dense_bisectors),
        "flags": list(r.flags),
        "notes": list(r.notes),
    }


def _route_from_dict(d: dict[str, Any]) -> Route:
    params: dict[str, Any] = {}
    for k, v in d["params"].items():
        if k == "k":
            params[k] = int(v)
        elif isinstance(v, str) and v != "auto":
            params[k] = float(v)
        else:
            params[k] = v
    return Route(
        algorithm=d["algorithm"],
        params=params,
        s_nodes=tuple(d["s_nodes"]),
        walk=tuple((int(e), bool(f)) for e, f in d["walk"]),
        edge_multiset={int(e): int(c) for e, c in d["edge_multiset"]},
        length=_f(d["length"]),
        hull=tuple(tuple(h) for h in d["hull"]),
        loop_walks=tuple(tuple((int(e), bool(f)) for e, f in w) for w in d["loop_walks"]),
        dense_bisectors=tuple(d["dense_bisectors"]),
        flags=tuple(d["flags"]),
        notes=tuple(d["notes"]),
    )


def _metrics_from_dict(d: dict[str, Any]) -> RouteMetrics:
    ints = {"pairs_viewed", "distinct_edge_count", "direction_changes", "repeated_edge_count"}
    kw = {}
    for f in fields(RouteMetrics):
        v = d[f.name]
        kw[f.name] = bool(v) if f.name == "scenic_ok" else int(v) if f.name in ints else _f(v)
    return RouteMetrics(**kw)


def report_to_dict(report: RouteReport) -> dict[str, Any]:
    return {
        "schema": SCHEMA_VERSION,
        "status": report.status,
        "config": _config_to_dict(report.config),
        "summary": report.summary(),
        "points": points_to_dict(report.graph.points),
        "graph": _graph_to_dict(report.graph),
        "route": None if report.route is None else _route_to_dict(report.route),
        "metrics": None if report.metrics is None else report.metrics.to_dict(),
        "warnings": list(report.warnings),
    }


def report_from_dict(d: dict[str, Any]) -> RouteReport:
    ps = parse_points(d["points"])
    return RouteReport(
        config=_config_from_dict(d["config"]),
        graph=_graph_from_dict(d["graph"], ps),
        route=None if d["route"] is None else _route_from_dict(d["route"]),
        metrics=None if d["metrics"] is None else _metrics_from_dict(d["metrics"]),
        status=d["status"],
        warnings=tuple(d["warnings"]),
    )


def route_json(report: RouteReport) -> str:
    return dumps(report_to_dict(report)) + "\n"


def write_route_json(report: RouteReport, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(route_json(report))


def read_route_json(path: str | os.PathLike) -> RouteReport:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from exc
    return report_from_dict(data)
