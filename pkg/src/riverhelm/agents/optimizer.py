"""Pluggable target-suggestion interface.

Real flow-optimal positioning is out of scope; the default plugin just picks
the cheapest parking area to reach. Anything implementing `suggest_target`
can be swapped in.
"""

from __future__ import annotations

from typing import Protocol

from ..mdl import distance_m, routing
from ..mdl.model import MapDocument
from ..sim.world import RobotState
from .events import NoCandidate


class OptimizerPlugin(Protocol):
    def suggest_target(self, doc: MapDocument, robot: RobotState) -> str:
        """Landmark id the robot should move to; must resolve in `doc`."""
        ...


def nearest_landmark_id(doc: MapDocument, robot: RobotState) -> str:
    """Closest landmark to the robot by straight-line distance (tie: id)."""
    return min(
        doc.landmarks,
        key=lambda l: (distance_m(robot.position, l.position), l.id),
    ).id


class DefaultOptimizer:
    """Nearest parking_area by route cost; straight-line when unrouteable."""

    def suggest_target(self, doc: MapDocument, robot: RobotState) -> str:
        candidates = [l for l in doc.landmarks if l.kind == "parking_area"]
        if not candidates:
            raise NoCandidate("map has no parking_area landmark")
        start = nearest_landmark_id(doc, robot)
        routed: list[tuple[float, str]] = []
        for l in candidates:
            try:
                cost = routing.route_cost_m(doc, routing.route_to(doc, start, l.id))
            except routing.NoRoute:
                continue
            routed.append((cost, l.id))
        if routed:
            return min(routed)[1]
        return min((distance_m(robot.position, l.position), l.id) for l in candidates)[1]


def default_optimizer(doc: MapDocument, robot: RobotState) -> str:
    return DefaultOptimizer().suggest_target(doc, robot)
