"""``scenic`` command line: gen | build | route | render.

Exit codes: 0 success, 2 validation/parse error, 3 empty graph, 4 I/O error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Sequence

from .app import (
    RunConfig,
    dumps,
    generate_config,
    points_to_dict,
    read_route_json,
    route_json,
    run_pipeline,
)
from .errors import ScenicError
from .routes import ALGORITHMS
from .svg import render_svg_text

log = logging.getLogger("scenic")

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_EMPTY = 3
EXIT_IO = 4


def _alpha(text: str) -> float | str:
    if text == "auto":
        return text
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError("alpha must be 'auto' or a number") from None
    if value < 0:
        raise argparse.ArgumentTypeError("alpha must be >= 0")
    return value


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="scenic", description="Scenic routes over red/blue point sets.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="write a random point set")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--n-red", type=int, default=4)
    gen.add_argument("--n-blue", type=int, default=4)
    gen.add_argument("--extent", type=float, default=10.0)
    gen.add_argument("--mode", choices=("two_class", "single_class"), default="two_class")
    gen.add_argument("--out", default=None, help="output file (default stdout)")

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--input", required=True, help="points JSON file")
        p.add_argument("--mode", choices=("two_class", "single_class"), default=None)
        p.add_argument("--delta", type=float, default=None, help="box expansion (default 0.1 x extent diagonal)")
        p.add_argument("--eps", type=float, default=None, help="relative geometric tolerance")
        p.add_argument("--out-json", default=None)
        p.add_argument("--out-svg", default=None)

    build = sub.add_parser("build", help="build the scenic graph only")
    common(build)

    route = sub.add_parser("route", help="build the graph and generate a route")
    common(route)
    route.add_argument("--algorithm", choices=ALGORITHMS, required=True)
    route.add_argument("--k", type=int, default=None)
    route.add_argument("--bound", type=float, default=None)
    route.add_argument("--alpha", type=_alpha, default="auto")
    route.add_argument("--seed", type=int, default=0)

    render = sub.add_parser("render", help="render an existing report JSON to SVG")
    render.add_argument("--input", required=True, help="report JSON written by build/route")
    render.add_argument("--out-svg", required=True)
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    kw = dict(
        algorithm=getattr(args, "algorithm", None),
        mode=args.mode,
        delta=args.delta,
        input=args.input,
        out_json=args.out_json,
        out_svg=args.out_svg,
    )
    if args.eps is not None:
        kw["eps"] = args.eps
    if args.command == "route":
        kw.update(k=args.k, bound=args.bound, alpha=args.alpha, seed=args.seed)
    return RunConfig(**kw)


def _run(args: argparse.Namespace) -> int:
    if args.command == "gen":
        ps = generate_config(args.seed, args.n_red, args.n_blue, args.extent, args.mode)
        _write(args.out, dumps(points_to_dict(ps)) + "\n")
        return EXIT_OK
    if args.command == "render":
        report = read_route_json(args.input)
        _write(args.out_svg, render_svg_text(report))
        return EXIT_OK

    cfg = _config(args)
    report = run_pipeline(cfg)
    for w in report.warnings + report.graph.warnings:
        log.warning(w)
    if cfg.out_json:
        _write(cfg.out_json, route_json(report))
    if cfg.out_svg:
        _write(cfg.out_svg, render_svg_text(report))
    summary = report.summary()
    line = f"status={report.status} nodes={summary['nodes']} edges={summary['edges']}"
    if report.metrics is not None:
        m = report.metrics
        line += (
            f" length={m.total_length:.6g} completeness={m.completeness:.4g}"
            f" direction_changes={m.direction_changes} repeated_edges={m.repeated_edge_count}"
        )
    if report.route is not None and report.route.flags:
        line += " flags=" + ",".join(report.route.flags)
    print(line, file=sys.stderr if cfg.out_json in (None, "-") else sys.stdout)
    return EXIT_EMPTY if report.status == "empty_graph" else EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return _run(args)
    except ScenicError as exc:
        log.error("%s", exc)
        return EXIT_INVALID
    except OSError as exc:
        log.error("%s", exc)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
