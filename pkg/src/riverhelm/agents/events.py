"""UI event language and interpreter responses: the top layer of the
communication model."""

from __future__ import annotations

from dataclasses import dataclass

from ..mdl.model import GeoCoordinate
from ..sim.commands import RoboticCommand

MENU_ITEMS = ("drag_place", "park", "compute_optimal_flow", "anchor", "release")


@dataclass(frozen=True)
class ClickOnRobot:
    robot_id: str


@dataclass(frozen=True)
class DragRobot:
    robot_id: str
    target: GeoCoordinate


@dataclass(frozen=True)
class PlaceRobot:
    robot_id: str


@dataclass(frozen=True)
class MenuSelect:
    robot_id: str
    item: str


UIEvent = ClickOnRobot | DragRobot | PlaceRobot | MenuSelect


@dataclass(frozen=True)
class ContextMenu:
    items: tuple[str, ...]
    scale_denominator: int | None  # None marks "no scale region here"


@dataclass(frozen=True)
class DragStarted:
    robot_id: str


@dataclass(frozen=True)
class Dispatched:
    commands: tuple[RoboticCommand, ...]


@dataclass(frozen=True)
class Rejected:
    reason: str


InterpreterResponse = ContextMenu | DragStarted | Dispatched | Rejected


class AgentError(Exception):
    pass


class UnknownRobot(AgentError):
    def __init__(self, robot_id: str):
        super().__init__(f"unknown robot: {robot_id}")
        self.robot_id = robot_id


class InvalidEventSequence(AgentError):
    """PlaceRobot with no pending drag for that robot."""


class OffMap(AgentError):
    """Drag target outside all scale regions."""


class RobotFaulted(AgentError):
    """Robot currently owned by the exception guard."""

    def __init__(self, robot_id: str, state: str):
        super().__init__(f"{robot_id} is {state}; operator control suspended")
        self.robot_id = robot_id
        self.state = state


class NoCandidate(AgentError):
    """Optimizer found no target landmark on this map."""
