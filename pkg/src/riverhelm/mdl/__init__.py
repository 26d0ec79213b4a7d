"""Map Definition Language engine: model, parser, serializer, geometry, routing."""

from .errors import (
    AnnotationRefError,
    Diagnostic,
    MdlError,
    MdlParseError,
    MdlValidationError,
    NoRoute,
    NoScaleRegion,
    OffRoute,
    OutOfRange,
    UnknownFlow,
)
from .geometry import (
    ambient_flow,
    annotate_for_robot,
    distance_m,
    flow_at,
    nearest_flow,
    offset_position,
    polyline_length_m,
    project_onto_flow,
    query_scale,
    to_local_xy,
    waypoint_fractions,
)
from .model import (
    FlowSegment,
    GeoCoordinate,
    Landmark,
    LANDMARK_KINDS,
    MapDocument,
    MdlAnnotation,
    ScaleRegion,
)
from .parser import ParsedMdl, parse_mdl
from .routing import best_flow_for_leg, build_graph, route_cost_m, route_to
from .serializer import serialize_mdl

__all__ = [
    "AnnotationRefError",
    "Diagnostic",
    "FlowSegment",
    "GeoCoordinate",
    "LANDMARK_KINDS",
    "Landmark",
    "MapDocument",
    "MdlAnnotation",
    "MdlError",
    "MdlParseError",
    "MdlValidationError",
    "NoRoute",
    "NoScaleRegion",
    "OffRoute",
    "OutOfRange",
    "ParsedMdl",
    "ScaleRegion",
    "UnknownFlow",
    "ambient_flow",
    "annotate_for_robot",
    "best_flow_for_leg",
    "build_graph",
    "distance_m",
    "flow_at",
    "nearest_flow",
    "offset_position",
    "parse_mdl",
    "polyline_length_m",
    "project_onto_flow",
    "query_scale",
    "route_cost_m",
    "route_to",
    "serialize_mdl",
    "to_local_xy",
    "waypoint_fractions",
]
