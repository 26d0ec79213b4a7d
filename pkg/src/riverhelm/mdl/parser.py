"""Strict parser for the MDL XML dialect.

Grammar (closed; anything else is rejected):

    <Map id name>
      <ScaleRegion id lat_min lon_min lat_max lon_max denominator/>
      <Landmark id kind lat lon depth? label?/>
      <Flow id from to v_from_e v_from_n v_to_e v_to_n>
        <Waypoint ref/>
      </Flow>
      <Annotation robot flow? lookahead?>
        <Passed ref/>
      </Annotation>
    </Map>

Parsing is total: any byte string either yields a validated document or a
`MdlParseError` / `MdlValidationError`. Diagnostics carry the source position
of the offending element where one exists.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from xml.parsers import expat

from .errors import (
    BAD_COORDINATE,
    BAD_ID,
    BAD_KIND,
    BAD_NUMBER,
    BAD_SCALE,
    MISSING_ATTRIBUTE,
    UNKNOWN_ATTRIBUTE,
    UNKNOWN_ELEMENT,
    Diagnostic,
    MdlParseError,
    MdlValidationError,
)
from .model import (
    FlowSegment,
    GeoCoordinate,
    Landmark,
    MapDocument,
    MdlAnnotation,
    ScaleRegion,
    validate_annotations,
    validate_components,
)


@dataclass
class _Element:
    tag: str
    attrs: dict[str, str]
    line: int
    col: int
    children: list["_Element"] = field(default_factory=list)


@dataclass
class ParsedMdl:
    """A validated document together with its per-robot annotations."""

    document: MapDocument
    annotations: tuple[MdlAnnotation, ...]


_SCHEMA: dict[str, tuple[set[str], set[str], set[str]]] = {
    # tag -> (required attrs, optional attrs, allowed child tags)
    "Map": ({"id", "name"}, set(), {"ScaleRegion", "Landmark", "Flow", "Annotation"}),
    "ScaleRegion": ({"id", "lat_min", "lon_min", "lat_max", "lon_max", "denominator"}, set(), set()),
    "Landmark": ({"id", "kind", "lat", "lon"}, {"depth", "label"}, set()),
    "Flow": ({"id", "from", "to", "v_from_e", "v_from_n", "v_to_e", "v_to_n"}, set(), {"Waypoint"}),
    "Waypoint": ({"ref"}, set(), set()),
    "Annotation": ({"robot"}, {"flow", "lookahead"}, {"Passed"}),
    "Passed": ({"ref"}, set(), set()),
}


def _build_tree(text: str | bytes) -> _Element:
    parser = expat.ParserCreate()
    root: list[_Element] = []
    stack: list[_Element] = []
    problems: list[tuple[int, int, str]] = []

    def start(tag, attrs):
        el = _Element(tag, dict(attrs), parser.CurrentLineNumber, parser.CurrentColumnNumber + 1)
        if stack:
            stack[-1].children.append(el)
        else:
            root.append(el)
        stack.append(el)

    def end(_tag):
        stack.pop()

    def chars(data):
        if data.strip():
            problems.append((
                parser.CurrentLineNumber,
                parser.CurrentColumnNumber + 1,
                f"unexpected text content {data.strip()[:30]!r}",
            ))

    parser.StartElementHandler = start
    parser.EndElementHandler = end
    parser.CharacterDataHandler = chars
    try:
        if isinstance(text, str):
            text = text.encode("utf-8", errors="replace")
        parser.Parse(text, True)
    except expat.ExpatError as exc:
        raise MdlParseError(exc.lineno, exc.offset + 1, expat.errors.messages[exc.code]) from None
    if problems:
        line, col, message = problems[0]
        raise MdlParseError(line, col, message)
    return root[0]


class _DocBuilder:
    def __init__(self) -> None:
        self.diagnostics: list[Diagnostic] = []
        self.scale_regions: list[ScaleRegion] = []
        self.landmarks: list[Landmark] = []
        self.flows: list[FlowSegment] = []
        self.annotations: list[MdlAnnotation] = []
        self.positions: dict[str, tuple[int, int]] = {}

    def fail(self, rule: str, el: _Element, message: str, offending: str | None = None) -> None:
        self.diagnostics.append(Diagnostic(
            rule_id=rule,
            offending_id=offending or el.attrs.get("id", el.tag),
            message=message,
            line=el.line,
            col=el.col,
        ))

    def check_shape(self, el: _Element) -> bool:
        """Schema conformance for one element; returns False when unusable."""
        spec = _SCHEMA.get(el.tag)
        if spec is None:
            self.fail(UNKNOWN_ELEMENT, el, f"unknown element <{el.tag}>")
            return False
        required, optional, children = spec
        ok = True
        for name in el.attrs:
            if name not in required and name not in optional:
                self.fail(UNKNOWN_ATTRIBUTE, el, f"unknown attribute {name!r} on <{el.tag}>")
        for name in required:
            if name not in el.attrs:
                self.fail(MISSING_ATTRIBUTE, el, f"<{el.tag}> is missing attribute {name!r}")
                ok = False
        for child in el.children:
            if child.tag not in children:
                self.check_shape(child)  # emits UNKNOWN_ELEMENT (or nested complaints)
        return ok

    def number(self, el: _Element, attr: str, rule: str) -> float | None:
        raw = el.attrs[attr]
        try:
            return float(raw)
        except ValueError:
            self.fail(rule, el, f"attribute {attr!r} of <{el.tag}> is not a number: {raw!r}")
            return None

    def build_scale_region(self, el: _Element) -> None:
        if not self.check_shape(el):
            return
        bounds = [self.number(el, a, BAD_COORDINATE) for a in ("lat_min", "lon_min", "lat_max", "lon_max")]
        raw_den = el.attrs["denominator"]
        try:
            denominator = int(raw_den)
        except ValueError:
            self.fail(BAD_NUMBER, el, f"denominator is not an integer: {raw_den!r}")
            return
        if any(v is None for v in bounds):
            return
        try:
            region = ScaleRegion(el.attrs["id"], bounds[0], bounds[1], bounds[2], bounds[3], denominator)
        except ValueError as exc:
            self.fail(BAD_SCALE if "id" not in str(exc) else BAD_ID, el, str(exc))
            return
        self.positions[region.id] = (el.line, el.col)
        self.scale_regions.append(region)

    def build_landmark(self, el: _Element) -> None:
        if not self.check_shape(el):
            return
        lat = self.number(el, "lat", BAD_COORDINATE)
        lon = self.number(el, "lon", BAD_COORDINATE)
        depth = self.number(el, "depth", BAD_COORDINATE) if "depth" in el.attrs else 0.0
        if lat is None or lon is None or depth is None:
            return
        try:
            position = GeoCoordinate(lat, lon, depth)
        except ValueError as exc:
            self.fail(BAD_COORDINATE, el, str(exc))
            return
        try:
            landmark = Landmark(el.attrs["id"], el.attrs["kind"], position, el.attrs.get("label", ""))
        except ValueError as exc:
            self.fail(BAD_KIND if "kind" in str(exc) else BAD_ID, el, str(exc))
            return
        self.positions[landmark.id] = (el.line, el.col)
        self.landmarks.append(landmark)

    def build_flow(self, el: _Element) -> None:
        if not self.check_shape(el):
            return
        comps = [self.number(el, a, BAD_NUMBER) for a in ("v_from_e", "v_from_n", "v_to_e", "v_to_n")]
        if any(v is None for v in comps):
            return
        waypoints: list[str] = []
        for child in el.children:
            if child.tag != "Waypoint":
                continue
            if self.check_shape(child):
                waypoints.append(child.attrs["ref"])
        try:
            flow = FlowSegment(
                id=el.attrs["id"],
                from_id=el.attrs["from"],
                to_id=el.attrs["to"],
                waypoint_ids=tuple(waypoints),
                v_from=(comps[0], comps[1]),
                v_to=(comps[2], comps[3]),
            )
        except ValueError as exc:
            self.fail(BAD_ID, el, str(exc))
            return
        self.positions[flow.id] = (el.line, el.col)
        self.flows.append(flow)

    def build_annotation(self, el: _Element) -> None:
        if not self.check_shape(el):
            return
        passed: list[str] = []
        for child in el.children:
            if child.tag != "Passed":
                continue
            if self.check_shape(child):
                passed.append(child.attrs["ref"])
        try:
            annotation = MdlAnnotation(
                robot_id=el.attrs["robot"],
                landmarks_passed=tuple(passed),
                lookahead_landmark=el.attrs.get("lookahead"),
                active_flow=el.attrs.get("flow"),
            )
        except ValueError as exc:
            self.fail(BAD_ID, el, str(exc), offending=el.attrs.get("robot", el.tag))
            return
        self.positions[f"annotation:{annotation.robot_id}"] = (el.line, el.col)
        self.annotations.append(annotation)

    def locate(self, diag: Diagnostic) -> Diagnostic:
        if diag.line is not None:
            return diag
        pos = self.positions.get(diag.offending_id) or self.positions.get(f"annotation:{diag.offending_id}")
        if pos is None:
            return diag
        return Diagnostic(diag.rule_id, diag.offending_id, diag.message, pos[0], pos[1])


def parse_mdl(text: str | bytes) -> ParsedMdl:
    """Parse and validate an MDL document.

    Raises `MdlParseError` for malformed XML and `MdlValidationError` (with
    every collected diagnostic) for grammar or invariant violations.
    """
    root = _build_tree(text)
    builder = _DocBuilder()

    if root.tag != "Map":
        builder.fail(UNKNOWN_ELEMENT, root, f"root element must be <Map>, got <{root.tag}>")
        raise MdlValidationError(builder.diagnostics)
    builder.check_shape(root)

    dispatch = {
        "ScaleRegion": builder.build_scale_region,
        "Landmark": builder.build_landmark,
        "Flow": builder.build_flow,
        "Annotation": builder.build_annotation,
    }
    for child in root.children:
        handler = dispatch.get(child.tag)
        if handler is not None:
            handler(child)

    map_id = root.attrs.get("id", "")
    map_name = root.attrs.get("name", "")

    diagnostics = list(builder.diagnostics)
    diagnostics += validate_components(
        tuple(builder.landmarks), tuple(builder.flows), tuple(builder.scale_regions)
    )
    if diagnostics:
        raise MdlValidationError([builder.locate(d) for d in diagnostics])

    document = MapDocument(
        id=map_id,
        name=map_name,
        landmarks=tuple(builder.landmarks),
        flows=tuple(builder.flows),
        scale_regions=tuple(builder.scale_regions),
    )

    annotation_diags = validate_annotations(document, tuple(builder.annotations))
    if annotation_diags:
        raise MdlValidationError([builder.locate(d) for d in annotation_diags])

    annotations = tuple(sorted(builder.annotations, key=lambda a: a.robot_id))
    return ParsedMdl(document=document, annotations=annotations)
