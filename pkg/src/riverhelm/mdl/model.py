"""Domain types for the Map Definition Language.

All values are immutable after construction and normalized to the canonical
serialization grid (coordinates 7 decimals, depth 2, flow vectors 3), so the
XML round trip is exact by construction. `MapDocument` validates its whole
invariant set in `__post_init__` and cannot exist in an invalid state.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import (
    BAD_ANNOTATION,
    BAD_COORDINATE,
    BAD_ID,
    BAD_KIND,
    BAD_SCALE,
    DANGLING_REF,
    DUPLICATE_ID,
    DUPLICATE_WAYPOINT,
    FLOW_ENDPOINTS,
    FLOW_UNDERPOPULATED,
    NO_FUEL_TERMINAL,
    Diagnostic,
    MdlValidationError,
)

ID_RE = re.compile(r"[A-Za-z0-9_-]+\Z")

LANDMARK_KINDS = (
    "marker",
    "flow_obstacle",
    "static_obstacle",
    "parking_area",
    "fuel_rendezvous_terminal",
)

# Accepted spellings that normalize to a canonical kind on parse.
KIND_ALIASES = {"flow_obstacles": "flow_obstacle"}

COORD_DECIMALS = 7   # ~1 cm of latitude
DEPTH_DECIMALS = 2
VEL_DECIMALS = 3


def _check_id(value: str, what: str) -> None:
    if not ID_RE.match(value or ""):
        raise ValueError(f"bad {what} id: {value!r}")


@dataclass(frozen=True)
class GeoCoordinate:
    """WGS-84 position; depth is meters below the surface."""

    lat: float
    lon: float
    depth: float = 0.0

    def __post_init__(self):
        lat = round(float(self.lat), COORD_DECIMALS)
        lon = round(float(self.lon), COORD_DECIMALS)
        depth = round(float(self.depth), DEPTH_DECIMALS)
        if not (-90.0 <= lat <= 90.0):
            raise ValueError(f"lat out of range: {lat}")
        if not (-180.0 <= lon <= 180.0):
            raise ValueError(f"lon out of range: {lon}")
        if depth < 0.0:
            raise ValueError(f"depth must be >= 0: {depth}")
        object.__setattr__(self, "lat", lat)
        object.__setattr__(self, "lon", lon)
        object.__setattr__(self, "depth", depth)


@dataclass(frozen=True)
class Landmark:
    id: str
    kind: str
    position: GeoCoordinate
    label: str = ""

    def __post_init__(self):
        _check_id(self.id, "landmark")
        kind = KIND_ALIASES.get(self.kind, self.kind)
        if kind not in LANDMARK_KINDS:
            raise ValueError(f"bad landmark kind: {self.kind!r}")
        object.__setattr__(self, "kind", kind)


@dataclass(frozen=True)
class FlowSegment:
    """Directed polyline between two landmarks carrying endpoint flow vectors.

    The water velocity along the segment is the linear interpolation of
    `v_from` at the start and `v_to` at the end, components east/north in m/s.
    """

    id: str
    from_id: str
    to_id: str
    waypoint_ids: tuple[str, ...]
    v_from: tuple[float, float]
    v_to: tuple[float, float]

    def __post_init__(self):
        _check_id(self.id, "flow")
        wps = tuple(self.waypoint_ids)
        vf = tuple(round(float(c), VEL_DECIMALS) for c in self.v_from)
        vt = tuple(round(float(c), VEL_DECIMALS) for c in self.v_to)
        if len(vf) != 2 or len(vt) != 2:
            raise ValueError("flow vectors must have two components")
        object.__setattr__(self, "waypoint_ids", wps)
        object.__setattr__(self, "v_from", vf)
        object.__setattr__(self, "v_to", vt)


@dataclass(frozen=True)
class ScaleRegion:
    """Axis-aligned lat/lon rectangle carrying a 1:N display scale."""

    id: str
    lat_min: float
    lon_min: float
    lat_max: float
    lon_max: float
    scale_denominator: int

    def __post_init__(self):
        _check_id(self.id, "scale region")
        for name in ("lat_min", "lon_min", "lat_max", "lon_max"):
            object.__setattr__(self, name, round(float(getattr(self, name)), COORD_DECIMALS))
        object.__setattr__(self, "scale_denominator", int(self.scale_denominator))

    def contains(self, p: GeoCoordinate) -> bool:
        return self.lat_min <= p.lat <= self.lat_max and self.lon_min <= p.lon <= self.lon_max

    def area_deg2(self) -> float:
        return (self.lat_max - self.lat_min) * (self.lon_max - self.lon_min)


@dataclass(frozen=True)
class MdlAnnotation:
    """Per-robot dynamic markup: waypoints passed and the lookahead waypoint."""

    robot_id: str
    landmarks_passed: tuple[str, ...] = ()
    lookahead_landmark: str | None = None
    active_flow: str | None = None

    def __post_init__(self):
        _check_id(self.robot_id, "robot")
        passed = tuple(self.landmarks_passed)
        if len(set(passed)) != len(passed):
            raise ValueError(f"landmarks_passed not distinct for {self.robot_id}")
        if self.lookahead_landmark is not None and self.lookahead_landmark in passed:
            raise ValueError(f"lookahead landmark already passed for {self.robot_id}")
        object.__setattr__(self, "landmarks_passed", passed)


@dataclass(frozen=True)
class MapDocument:
    """A validated river map: landmarks, flow segments and scale regions.

    Children are stored sorted by id (the canonical order), so two documents
    with the same content compare equal regardless of construction order.
    """

    id: str
    name: str
    landmarks: tuple[Landmark, ...] = ()
    flows: tuple[FlowSegment, ...] = ()
    scale_regions: tuple[ScaleRegion, ...] = ()
    _landmark_index: dict = field(default_factory=dict, repr=False, compare=False)
    _flow_index: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        _check_id(self.id, "map")
        landmarks = tuple(sorted(self.landmarks, key=lambda l: l.id))
        flows = tuple(sorted(self.flows, key=lambda f: f.id))
        regions = tuple(sorted(self.scale_regions, key=lambda r: r.id))
        object.__setattr__(self, "landmarks", landmarks)
        object.__setattr__(self, "flows", flows)
        object.__setattr__(self, "scale_regions", regions)
        diagnostics = validate_components(landmarks, flows, regions)
        if diagnostics:
            raise MdlValidationError(diagnostics)
        object.__setattr__(self, "_landmark_index", {l.id: l for l in landmarks})
        object.__setattr__(self, "_flow_index", {f.id: f for f in flows})

    def landmark(self, landmark_id: str) -> Landmark:
        return self._landmark_index[landmark_id]

    def flow(self, flow_id: str) -> FlowSegment:
        return self._flow_index[flow_id]

    def has_landmark(self, landmark_id: str) -> bool:
        return landmark_id in self._landmark_index

    def has_flow(self, flow_id: str) -> bool:
        return flow_id in self._flow_index

    def fuel_terminals(self) -> list[Landmark]:
        return [l for l in self.landmarks if l.kind == "fuel_rendezvous_terminal"]

    def with_extra(
        self,
        landmarks: tuple[Landmark, ...] = (),
        flows: tuple[FlowSegment, ...] = (),
    ) -> "MapDocument":
        """New document with additional landmarks/flows (used for drop targets)."""
        return MapDocument(
            id=self.id,
            name=self.name,
            landmarks=self.landmarks + tuple(landmarks),
            flows=self.flows + tuple(flows),
            scale_regions=self.scale_regions,
        )


def validate_components(
    landmarks: tuple[Landmark, ...],
    flows: tuple[FlowSegment, ...],
    regions: tuple[ScaleRegion, ...],
) -> list[Diagnostic]:
    """Document-level invariant checks shared by the parser and the constructor.

    Field-level problems (bad ranges, bad kinds) are already impossible on
    constructed objects; the parser reports those separately with positions.
    """
    out: list[Diagnostic] = []

    for kind_name, items in (("landmark", landmarks), ("flow", flows), ("scale region", regions)):
        seen: set[str] = set()
        for item in items:
            if item.id in seen:
                out.append(Diagnostic(DUPLICATE_ID, item.id, f"duplicate {kind_name} id {item.id!r}"))
            seen.add(item.id)

    known = {l.id for l in landmarks}
    for f in flows:
        if len(f.waypoint_ids) < 2:
            out.append(Diagnostic(
                FLOW_UNDERPOPULATED, f.id,
                f"flow {f.id!r} lists {len(f.waypoint_ids)} waypoint(s); at least two are required",
            ))
        if f.from_id == f.to_id:
            out.append(Diagnostic(FLOW_ENDPOINTS, f.id, f"flow {f.id!r} starts and ends at {f.from_id!r}"))
        if f.waypoint_ids and (f.waypoint_ids[0] != f.from_id or f.waypoint_ids[-1] != f.to_id):
            out.append(Diagnostic(
                FLOW_ENDPOINTS, f.id,
                f"flow {f.id!r} waypoints must start at {f.from_id!r} and end at {f.to_id!r}",
            ))
        if len(set(f.waypoint_ids)) != len(f.waypoint_ids):
            out.append(Diagnostic(DUPLICATE_WAYPOINT, f.id, f"flow {f.id!r} repeats a waypoint"))
        for ref in (f.from_id, f.to_id, *f.waypoint_ids):
            if ref not in known:
                out.append(Diagnostic(DANGLING_REF, f.id, f"flow {f.id!r} references unknown landmark {ref!r}"))

    if not any(l.kind == "fuel_rendezvous_terminal" for l in landmarks):
        out.append(Diagnostic(
            NO_FUEL_TERMINAL, "-",
            "map has no fuel_rendezvous_terminal landmark (required for auto-park)",
        ))

    for r in regions:
        if r.lat_max <= r.lat_min or r.lon_max <= r.lon_min:
            out.append(Diagnostic(BAD_SCALE, r.id, f"scale region {r.id!r} has no area"))
        if r.scale_denominator <= 0:
            out.append(Diagnostic(BAD_SCALE, r.id, f"scale region {r.id!r} denominator must be positive"))

    return out


def validate_annotations(
    doc: MapDocument, annotations: tuple[MdlAnnotation, ...]
) -> list[Diagnostic]:
    out: list[Diagnostic] = []
    seen: set[str] = set()
    for a in annotations:
        if a.robot_id in seen:
            out.append(Diagnostic(DUPLICATE_ID, a.robot_id, f"duplicate annotation for robot {a.robot_id!r}"))
        seen.add(a.robot_id)
        refs = list(a.landmarks_passed)
        if a.lookahead_landmark is not None:
            refs.append(a.lookahead_landmark)
        for ref in refs:
            if not doc.has_landmark(ref):
                out.append(Diagnostic(DANGLING_REF, a.robot_id, f"annotation for {a.robot_id!r} references unknown landmark {ref!r}"))
        if a.active_flow is not None and not doc.has_flow(a.active_flow):
            out.append(Diagnostic(DANGLING_REF, a.robot_id, f"annotation for {a.robot_id!r} references unknown flow {a.active_flow!r}"))
    return out


# Re-exported so callers can catch annotation problems uniformly.
ANNOTATION_RULE = BAD_ANNOTATION
