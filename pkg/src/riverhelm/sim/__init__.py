"""Deterministic robot/river simulator with injectable failures."""

from .commands import (
    Anchor,
    GetCoordinates,
    Halt,
    MoveTo,
    Park,
    ReleaseAnchor,
    RoboticCommand,
    command_from_json,
    command_to_json,
)
from .world import (
    AnchorRefused,
    BadSpeed,
    CommTimeout,
    CommandError,
    FAILURE_FLAG_NAMES,
    FailureFlags,
    GpsFix,
    GpsUnavailable,
    NotAtTerminal,
    RobotState,
    SimConfig,
    SimError,
    UnknownRobot,
    World,
)

__all__ = [
    "Anchor",
    "AnchorRefused",
    "BadSpeed",
    "CommTimeout",
    "CommandError",
    "FAILURE_FLAG_NAMES",
    "FailureFlags",
    "GetCoordinates",
    "GpsFix",
    "GpsUnavailable",
    "Halt",
    "MoveTo",
    "NotAtTerminal",
    "Park",
    "ReleaseAnchor",
    "RobotState",
    "RoboticCommand",
    "SimConfig",
    "SimError",
    "UnknownRobot",
    "World",
    "command_from_json",
    "command_to_json",
]
