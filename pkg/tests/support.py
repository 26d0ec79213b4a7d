"""Shared builders and independent random generators for the test suite.

The generators only use public constructors, never engine internals, so the
documents they produce are valid by construction and usable as round-trip
and routing oracle inputs.
"""

from __future__ import annotations

import math
import random
import string

from riverhelm.mdl import (
    FlowSegment,
    GeoCoordinate,
    Landmark,
    MapDocument,
    MdlAnnotation,
    ScaleRegion,
)

EARTH_RADIUS_M = 6_371_000.0


def lm(lid: str, lat: float, lon: float, kind: str = "marker", depth: float = 0.0, label: str = "") -> Landmark:
    return Landmark(id=lid, kind=kind, position=GeoCoordinate(lat, lon, depth), label=label)


def flow(fid: str, *waypoints: str, v_from=(0.0, 0.0), v_to=(0.0, 0.0)) -> FlowSegment:
    return FlowSegment(
        id=fid,
        from_id=waypoints[0],
        to_id=waypoints[-1],
        waypoint_ids=tuple(waypoints),
        v_from=v_from,
        v_to=v_to,
    )


def region(rid: str, lat_min, lon_min, lat_max, lon_max, denominator) -> ScaleRegion:
    return ScaleRegion(rid, lat_min, lon_min, lat_max, lon_max, denominator)


def river_map(flow_east: float = 0.0) -> MapDocument:
    """Five-node map used across the suite.

    A -- B -- C is a north-running chain (~100 m legs); F (fuel terminal)
    east of A; P (parking area) east of B. `flow_east` puts a uniform
    eastward current on the chain.
    """
    v = (flow_east, 0.0)
    return MapDocument(
        id="river",
        name="test river",
        landmarks=(
            lm("A", 45.0, 12.0, label="head"),
            lm("B", 45.0009, 12.0, label="bend"),
            lm("C", 45.0018, 12.0, label="tail"),
            lm("F", 45.0, 12.0013, kind="fuel_rendezvous_terminal", label="fuel dock"),
            lm("P", 45.0009, 12.0013, kind="parking_area", label="bay"),
        ),
        flows=(
            flow("fab", "A", "B", v_from=v, v_to=v),
            flow("fbc", "B", "C", v_from=v, v_to=v),
            flow("faf", "A", "F"),
            flow("fbp", "B", "P"),
        ),
        scale_regions=(
            region("outer", 44.99, 11.99, 45.01, 12.01, 25000),
            region("inner", 44.9998, 11.9998, 45.0002, 12.0002, 5000),
        ),
    )


def on_flow_graph(doc: MapDocument, commands, start_landmark: str) -> bool:
    """True iff consecutive MoveTo targets are adjacent flow-polyline
    waypoints (directed), starting from the given landmark."""
    from riverhelm.sim import MoveTo

    pos_to_id = {(l.position.lat, l.position.lon): l.id for l in doc.landmarks}
    ids = [start_landmark]
    for c in commands:
        if isinstance(c, MoveTo):
            key = (c.target.lat, c.target.lon)
            if key not in pos_to_id:
                return False
            ids.append(pos_to_id[key])
    adjacent = {
        (f.waypoint_ids[i], f.waypoint_ids[i + 1])
        for f in doc.flows
        for i in range(len(f.waypoint_ids) - 1)
    }
    return all((u, v) in adjacent for u, v in zip(ids, ids[1:]))


def local_xy(p: GeoCoordinate, origin: tuple[float, float]) -> tuple[float, float]:
    """Independent equirectangular flattening (oracle-side copy)."""
    lat0, lon0 = origin
    x = math.radians(p.lon - lon0) * EARTH_RADIUS_M * math.cos(math.radians(lat0))
    y = math.radians(p.lat - lat0) * EARTH_RADIUS_M
    return x, y


def straight_distance_m(a: GeoCoordinate, b: GeoCoordinate) -> float:
    x, y = local_xy(b, (a.lat, a.lon))
    return math.hypot(x, y)


# ----------------------------------------------------------------- generators

_ID_ALPHABET = string.ascii_uppercase + string.digits


def _fresh_id(rng: random.Random, taken: set[str], prefix: str = "") -> str:
    while True:
        candidate = prefix + "".join(rng.choice(_ID_ALPHABET) for _ in range(4))
        if candidate not in taken:
            taken.add(candidate)
            return candidate


def random_document(rng: random.Random) -> tuple[MapDocument, tuple[MdlAnnotation, ...]]:
    """A random valid document plus a consistent annotation set."""
    taken: set[str] = set()
    n_landmarks = rng.randint(2, 8)
    kinds = ["marker", "flow_obstacle", "static_obstacle", "parking_area", "fuel_rendezvous_terminal"]
    landmarks = []
    for i in range(n_landmarks):
        kind = "fuel_rendezvous_terminal" if i == 0 else rng.choice(kinds)
        landmarks.append(Landmark(
            id=_fresh_id(rng, taken, "L"),
            kind=kind,
            position=GeoCoordinate(
                45.0 + rng.uniform(-0.01, 0.01),
                12.0 + rng.uniform(-0.01, 0.01),
                rng.choice([0.0, rng.uniform(0, 40)]),
            ),
            label=rng.choice(["", "spot", 'a "quoted" <label> & more', "ü-label"]),
        ))

    flows = []
    ids = [l.id for l in landmarks]
    for _ in range(rng.randint(0, 6)):
        if len(ids) < 2:
            break
        src, dst = rng.sample(ids, 2)
        middle_pool = [i for i in ids if i not in (src, dst)]
        middles = rng.sample(middle_pool, rng.randint(0, min(2, len(middle_pool))))
        flows.append(FlowSegment(
            id=_fresh_id(rng, taken, "F"),
            from_id=src,
            to_id=dst,
            waypoint_ids=(src, *middles, dst),
            v_from=(rng.uniform(-2, 2), rng.uniform(-2, 2)),
            v_to=(rng.uniform(-2, 2), rng.uniform(-2, 2)),
        ))

    regions = []
    for _ in range(rng.randint(0, 3)):
        lat0 = 45.0 + rng.uniform(-0.02, 0.01)
        lon0 = 12.0 + rng.uniform(-0.02, 0.01)
        regions.append(ScaleRegion(
            id=_fresh_id(rng, taken, "R"),
            lat_min=lat0,
            lon_min=lon0,
            lat_max=lat0 + rng.uniform(0.001, 0.02),
            lon_max=lon0 + rng.uniform(0.001, 0.02),
            scale_denominator=rng.choice([1000, 5000, 25000]),
        ))

    doc = MapDocument(
        id=_fresh_id(rng, taken, "M"),
        name=rng.choice(["river one", "<river> & co", ""]),
        landmarks=tuple(landmarks),
        flows=tuple(flows),
        scale_regions=tuple(regions),
    )

    annotations = []
    robot_ids = sorted(_fresh_id(rng, taken, "r") for _ in range(rng.randint(0, 3)))
    for robot_id in robot_ids:
        if flows and rng.random() < 0.8:
            f = rng.choice(flows)
            cut = rng.randint(0, len(f.waypoint_ids))
            passed = f.waypoint_ids[:cut]
            lookahead = f.waypoint_ids[cut] if cut < len(f.waypoint_ids) else None
            annotations.append(MdlAnnotation(
                robot_id=robot_id,
                landmarks_passed=passed,
                lookahead_landmark=lookahead,
                active_flow=f.id,
            ))
        else:
            annotations.append(MdlAnnotation(robot_id=robot_id))
    return doc, tuple(annotations)


def random_flow_graph(rng: random.Random, max_nodes: int = 10) -> MapDocument:
    """Connected-ish random directed flow graph for routing tests."""
    taken: set[str] = set()
    n = rng.randint(3, max_nodes)
    landmarks = []
    for i in range(n):
        kind = "fuel_rendezvous_terminal" if i == 0 else "marker"
        landmarks.append(Landmark(
            id=_fresh_id(rng, taken, "N"),
            kind=kind,
            position=GeoCoordinate(45.0 + rng.uniform(-0.02, 0.02), 12.0 + rng.uniform(-0.02, 0.02)),
        ))
    ids = [l.id for l in landmarks]
    flows = []
    pairs = [(u, v) for u in ids for v in ids if u != v]
    rng.shuffle(pairs)
    n_edges = rng.randint(n - 1, min(len(pairs), 3 * n))
    for u, v in pairs[:n_edges]:
        middle_pool = [i for i in ids if i not in (u, v)]
        middles = rng.sample(middle_pool, rng.randint(0, min(1, len(middle_pool))))
        flows.append(FlowSegment(
            id=_fresh_id(rng, taken, "E"),
            from_id=u,
            to_id=v,
            waypoint_ids=(u, *middles, v),
            v_from=(0.0, 0.0),
            v_to=(0.0, 0.0),
        ))
    return MapDocument(id="G", name="graph", landmarks=tuple(landmarks), flows=tuple(flows))
