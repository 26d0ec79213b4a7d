"""Geometric queries over a map: scale lookup, flow interpolation, projection.

Polylines are flattened to a local planar frame (equirectangular projection
about the polyline's vertex centroid), which is accurate to well under a
meter for river-scale maps. All queries are deterministic with stated
tie-breaking.
"""

from __future__ import annotations

import math

from .errors import NoScaleRegion, OffRoute, OutOfRange, UnknownFlow
from .model import FlowSegment, GeoCoordinate, MapDocument, MdlAnnotation

EARTH_RADIUS_M = 6_371_000.0

DEFAULT_CORRIDOR_M = 100.0


def to_local_xy(p: GeoCoordinate, origin: tuple[float, float]) -> tuple[float, float]:
    """East/north meters of `p` relative to an (origin_lat, origin_lon) frame."""
    lat0, lon0 = origin
    x = math.radians(p.lon - lon0) * EARTH_RADIUS_M * math.cos(math.radians(lat0))
    y = math.radians(p.lat - lat0) * EARTH_RADIUS_M
    return x, y


def offset_position(p: GeoCoordinate, dx_east_m: float, dy_north_m: float) -> GeoCoordinate:
    """Position displaced by local east/north meters; depth unchanged."""
    dlat = math.degrees(dy_north_m / EARTH_RADIUS_M)
    dlon = math.degrees(dx_east_m / (EARTH_RADIUS_M * math.cos(math.radians(p.lat))))
    return GeoCoordinate(p.lat + dlat, p.lon + dlon, p.depth)


def distance_m(a: GeoCoordinate, b: GeoCoordinate) -> float:
    x, y = to_local_xy(b, (a.lat, a.lon))
    return math.hypot(x, y)


def query_scale(doc: MapDocument, p: GeoCoordinate) -> int:
    """Scale denominator of the smallest containing region.

    Ties break by smaller denominator, then lexicographic region id.
    """
    best = None
    for r in doc.scale_regions:
        if not r.contains(p):
            continue
        key = (r.area_deg2(), r.scale_denominator, r.id)
        if best is None or key < best[0]:
            best = (key, r)
    if best is None:
        raise NoScaleRegion(f"({p.lat}, {p.lon}) lies in no scale region")
    return best[1].scale_denominator


def flow_at(doc: MapDocument, flow_id: str, t: float) -> tuple[float, float]:
    """Water velocity at fraction `t` along the flow: (1-t)*v_from + t*v_to."""
    if not doc.has_flow(flow_id):
        raise UnknownFlow(flow_id)
    if not 0.0 <= t <= 1.0:
        raise OutOfRange(f"t={t} outside [0, 1]")
    f = doc.flow(flow_id)
    return (
        (1.0 - t) * f.v_from[0] + t * f.v_to[0],
        (1.0 - t) * f.v_from[1] + t * f.v_to[1],
    )


def _polyline_frame(doc: MapDocument, flow: FlowSegment) -> tuple[float, float]:
    lats = [doc.landmark(w).position.lat for w in flow.waypoint_ids]
    lons = [doc.landmark(w).position.lon for w in flow.waypoint_ids]
    return sum(lats) / len(lats), sum(lons) / len(lons)


def polyline_xy(doc: MapDocument, flow: FlowSegment) -> list[tuple[float, float]]:
    origin = _polyline_frame(doc, flow)
    return [to_local_xy(doc.landmark(w).position, origin) for w in flow.waypoint_ids]


def polyline_length_m(doc: MapDocument, flow_id: str) -> float:
    if not doc.has_flow(flow_id):
        raise UnknownFlow(flow_id)
    pts = polyline_xy(doc, doc.flow(flow_id))
    return sum(math.dist(a, b) for a, b in zip(pts, pts[1:]))


def waypoint_fractions(doc: MapDocument, flow_id: str) -> list[tuple[str, float]]:
    """Arc-length fraction of every waypoint along the flow polyline."""
    if not doc.has_flow(flow_id):
        raise UnknownFlow(flow_id)
    flow = doc.flow(flow_id)
    pts = polyline_xy(doc, flow)
    seg = [math.dist(a, b) for a, b in zip(pts, pts[1:])]
    total = sum(seg)
    if total == 0.0:
        return [(w, 0.0) for w in flow.waypoint_ids]
    out = []
    cum = 0.0
    for i, w in enumerate(flow.waypoint_ids):
        out.append((w, cum / total))
        if i < len(seg):
            cum += seg[i]
    out[-1] = (flow.waypoint_ids[-1], 1.0)
    return out


def project_onto_flow(doc: MapDocument, flow_id: str, p: GeoCoordinate) -> tuple[float, float]:
    """Closest point on the flow polyline: (arc-length fraction, distance m).

    Equal-distance ties resolve to the smaller fraction.
    """
    if not doc.has_flow(flow_id):
        raise UnknownFlow(flow_id)
    flow = doc.flow(flow_id)
    origin = _polyline_frame(doc, flow)
    pts = [to_local_xy(doc.landmark(w).position, origin) for w in flow.waypoint_ids]
    px, py = to_local_xy(p, origin)

    seg = [math.dist(a, b) for a, b in zip(pts, pts[1:])]
    total = sum(seg)
    if total == 0.0:
        return 0.0, math.dist((px, py), pts[0])

    best_t = 0.0
    best_d = math.inf
    cum = 0.0
    for (ax, ay), (bx, by), length in zip(pts, pts[1:], seg):
        if length == 0.0:
            qx, qy, s = ax, ay, 0.0
        else:
            s = ((px - ax) * (bx - ax) + (py - ay) * (by - ay)) / (length * length)
            s = min(1.0, max(0.0, s))
            qx, qy = ax + s * (bx - ax), ay + s * (by - ay)
        d = math.hypot(px - qx, py - qy)
        if d < best_d:  # strict: earlier (smaller-t) candidate wins ties
            best_d = d
            best_t = (cum + s * length) / total
        cum += length
    return best_t, best_d


def annotate_for_robot(
    doc: MapDocument,
    flow_id: str,
    robot_id: str,
    p: GeoCoordinate,
    corridor_m: float = DEFAULT_CORRIDOR_M,
) -> MdlAnnotation:
    """Waypoints passed / lookahead for a robot near the given flow.

    A waypoint is passed once the projected fraction reaches it, so the
    from-landmark is passed immediately. Raises `OffRoute` when the robot is
    further than `corridor_m` from the polyline.
    """
    if corridor_m <= 0:
        raise ValueError("corridor_m must be positive")
    t, dist = project_onto_flow(doc, flow_id, p)
    if dist > corridor_m:
        raise OffRoute(dist)
    passed: list[str] = []
    lookahead: str | None = None
    for w, frac in waypoint_fractions(doc, flow_id):
        if frac <= t:
            passed.append(w)
        elif lookahead is None:
            lookahead = w
    return MdlAnnotation(
        robot_id=robot_id,
        landmarks_passed=tuple(passed),
        lookahead_landmark=lookahead,
        active_flow=flow_id,
    )


def nearest_flow(doc: MapDocument, p: GeoCoordinate) -> tuple[str, float, float] | None:
    """(flow_id, fraction, distance) of the closest flow polyline, if any.

    Ties break by flow id (documents store flows sorted by id).
    """
    best: tuple[float, str, float] | None = None
    for flow in doc.flows:
        t, d = project_onto_flow(doc, flow.id, p)
        if best is None or (d, flow.id) < (best[0], best[1]):
            best = (d, flow.id, t)
    if best is None:
        return None
    return best[1], best[2], best[0]


def ambient_flow(doc: MapDocument, p: GeoCoordinate, corridor_m: float = DEFAULT_CORRIDOR_M) -> tuple[float, float]:
    """Water velocity a robot at `p` experiences; zero beyond the corridor."""
    found = nearest_flow(doc, p)
    if found is None:
        return 0.0, 0.0
    flow_id, t, d = found
    if d > corridor_m:
        return 0.0, 0.0
    return flow_at(doc, flow_id, t)
