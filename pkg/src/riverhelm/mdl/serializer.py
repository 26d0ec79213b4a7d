"""Canonical serializer for MDL documents.

One byte representation per document: fixed element order (scale regions,
landmarks, flows, annotations), fixed attribute order, children sorted by id,
numbers on the canonical decimal grid. Serializing twice is byte-identical.
"""

from __future__ import annotations

from xml.sax.saxutils import quoteattr

from .errors import AnnotationRefError, DANGLING_REF, MdlValidationError
from .model import MapDocument, MdlAnnotation, validate_annotations


def _coord(value: float) -> str:
    return f"{value:.7f}"


def _depth(value: float) -> str:
    return f"{value:.2f}"


def _vel(value: float) -> str:
    return f"{value:.3f}"


def serialize_mdl(doc: MapDocument, annotations: tuple[MdlAnnotation, ...] = ()) -> str:
    """Render `doc` (plus per-robot annotations) as canonical MDL XML."""
    diags = validate_annotations(doc, tuple(annotations))
    for d in diags:
        if d.rule_id == DANGLING_REF:
            raise AnnotationRefError(d.offending_id, d.message)
    if diags:
        raise MdlValidationError(diags)

    lines = ['<?xml version="1.0" encoding="UTF-8"?>']
    lines.append(f"<Map id={quoteattr(doc.id)} name={quoteattr(doc.name)}>")

    for r in doc.scale_regions:
        lines.append(
            f"  <ScaleRegion id={quoteattr(r.id)}"
            f" lat_min={quoteattr(_coord(r.lat_min))} lon_min={quoteattr(_coord(r.lon_min))}"
            f" lat_max={quoteattr(_coord(r.lat_max))} lon_max={quoteattr(_coord(r.lon_max))}"
            f" denominator={quoteattr(str(r.scale_denominator))}/>"
        )

    for l in doc.landmarks:
        lines.append(
            f"  <Landmark id={quoteattr(l.id)} kind={quoteattr(l.kind)}"
            f" lat={quoteattr(_coord(l.position.lat))} lon={quoteattr(_coord(l.position.lon))}"
            f" depth={quoteattr(_depth(l.position.depth))} label={quoteattr(l.label)}/>"
        )

    for f in doc.flows:
        lines.append(
            f"  <Flow id={quoteattr(f.id)} from={quoteattr(f.from_id)} to={quoteattr(f.to_id)}"
            f" v_from_e={quoteattr(_vel(f.v_from[0]))} v_from_n={quoteattr(_vel(f.v_from[1]))}"
            f" v_to_e={quoteattr(_vel(f.v_to[0]))} v_to_n={quoteattr(_vel(f.v_to[1]))}>"
        )
        for ref in f.waypoint_ids:
            lines.append(f"    <Waypoint ref={quoteattr(ref)}/>")
        lines.append("  </Flow>")

    for a in sorted(annotations, key=lambda x: x.robot_id):
        attrs = [f"robot={quoteattr(a.robot_id)}"]
        if a.active_flow is not None:
            attrs.append(f"flow={quoteattr(a.active_flow)}")
        if a.lookahead_landmark is not None:
            attrs.append(f"lookahead={quoteattr(a.lookahead_landmark)}")
        if a.landmarks_passed:
            lines.append(f"  <Annotation {' '.join(attrs)}>")
            for ref in a.landmarks_passed:
                lines.append(f"    <Passed ref={quoteattr(ref)}/>")
            lines.append("  </Annotation>")
        else:
            lines.append(f"  <Annotation {' '.join(attrs)}/>")

    lines.append("</Map>")
    return "\n".join(lines) + "\n"
