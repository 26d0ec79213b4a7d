"""Error types and diagnostic rule ids for the MDL engine."""

from __future__ import annotations

from dataclasses import dataclass

# Document-level validation rules. A diagnostic always names one of these.
FLOW_UNDERPOPULATED = "FLOW_UNDERPOPULATED"
DANGLING_REF = "DANGLING_REF"
DUPLICATE_ID = "DUPLICATE_ID"
NO_FUEL_TERMINAL = "NO_FUEL_TERMINAL"
BAD_COORDINATE = "BAD_COORDINATE"
BAD_ID = "BAD_ID"
BAD_KIND = "BAD_KIND"
BAD_SCALE = "BAD_SCALE"
BAD_NUMBER = "BAD_NUMBER"
FLOW_ENDPOINTS = "FLOW_ENDPOINTS"
DUPLICATE_WAYPOINT = "DUPLICATE_WAYPOINT"
UNKNOWN_ELEMENT = "UNKNOWN_ELEMENT"
UNKNOWN_ATTRIBUTE = "UNKNOWN_ATTRIBUTE"
MISSING_ATTRIBUTE = "MISSING_ATTRIBUTE"
BAD_ANNOTATION = "BAD_ANNOTATION"


class MdlError(Exception):
    """Base class for all MDL engine errors."""


class MdlParseError(MdlError):
    """Malformed XML input; reported with the position of the defect."""

    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col
        self.message = message


@dataclass(frozen=True)
class Diagnostic:
    """One validation finding: rule id, offending id, optional position."""

    rule_id: str
    offending_id: str
    message: str
    line: int | None = None
    col: int | None = None

    def render(self) -> str:
        pos = f"{self.line}:{self.col}: " if self.line is not None else ""
        return f"{pos}{self.rule_id}: {self.message}"


class MdlValidationError(MdlError):
    """Well-formed XML that violates the document invariants.

    Carries every diagnostic found; `rule_id` / `offending_id` expose the
    first (primary) one.
    """

    def __init__(self, diagnostics: list[Diagnostic]):
        if not diagnostics:
            raise ValueError("MdlValidationError needs at least one diagnostic")
        super().__init__("; ".join(d.render() for d in diagnostics))
        self.diagnostics = diagnostics
        self.rule_id = diagnostics[0].rule_id
        self.offending_id = diagnostics[0].offending_id


class UnknownFlow(MdlError):
    def __init__(self, flow_id: str):
        super().__init__(f"unknown flow: {flow_id}")
        self.flow_id = flow_id


class OutOfRange(MdlError):
    """Interpolation parameter outside [0, 1]."""


class NoScaleRegion(MdlError):
    """Queried point lies inside no scale region."""


class OffRoute(MdlError):
    """Robot too far from the flow polyline to annotate."""

    def __init__(self, distance_m: float):
        super().__init__(f"off route by {distance_m:.1f} m")
        self.distance_m = distance_m


class NoRoute(MdlError):
    """Destination unreachable over the directed flow graph."""

    def __init__(self, from_id: str, to_id: str):
        super().__init__(f"no route from {from_id} to {to_id}")
        self.from_id = from_id
        self.to_id = to_id


class AnnotationRefError(MdlError):
    """Annotation references an id absent from the document."""

    def __init__(self, robot_id: str, ref: str):
        super().__init__(f"annotation for {robot_id} references unknown id {ref}")
        self.robot_id = robot_id
        self.ref = ref
