"""Scenic routes over red/blue points in the plane.

Build the graph of perpendicular-bisector intersections, compute all-pairs
shortest paths over it, generate routes and score them::

    from scenic import PointSet, Point2, build_graph, floyd_warshall, min_max_hull, summarize

    ps = PointSet([Point2(0, 0)], [Point2(4, 0), Point2(0, 4), Point2(6, 2)])
    g = build_graph(ps)
    route = min_max_hull(g, floyd_warshall(g), bound=10.0)
    print(summarize(route, g))
"""

from .app import (
    RouteReport,
    RunConfig,
    generate_config,
    parse_points_file,
    read_route_json,
    run_pipeline,
    write_route_json,
)
from .errors import (
    CoincidentPair,
    DegenerateBox,
    DegenerateInput,
    EmptyGraph,
    EmptyInput,
    KTooLarge,
    NoCandidate,
    ParseError,
    ScenicError,
    Unreachable,
    ValidationError,
)
from .geometry import (
    BoundingBox,
    LineStd,
    Point2,
    Segment,
    alpha_shape,
    clip_line_to_box,
    collinear,
    convex_hull,
    intersect_lines,
    is_scenic,
    make_bounding_box,
    perpendicular_bisector,
)
from .metrics import RouteMetrics, completeness, direction_changes, repeated_edge_count, summarize, verify_scenic
from .routes import Route, densest_line, endpoints_route, incremental_expansion, min_max_hull, min_max_next, stitch_path
from .scenic_graph import (
    ApspTables,
    Bisector,
    IntersectionNode,
    PointSet,
    ScenicEdge,
    ScenicGraph,
    build_graph,
    enumerate_bisectors,
    floyd_warshall,
    shortest_path,
    smallest_edge,
)
from .svg import render_svg

__version__ = "0.1.0"
