"""Three-layer agent runtime: UI events -> interpreter -> robotic commands."""

from .events import (
    AgentError,
    ClickOnRobot,
    ContextMenu,
    DragRobot,
    DragStarted,
    Dispatched,
    InterpreterResponse,
    InvalidEventSequence,
    MENU_ITEMS,
    MenuSelect,
    NoCandidate,
    OffMap,
    PlaceRobot,
    Rejected,
    RobotFaulted,
    UIEvent,
    UnknownRobot,
)
from .optimizer import DefaultOptimizer, OptimizerPlugin, default_optimizer, nearest_landmark_id
from .session import FleetSession, PlanEntry, SessionConfig

__all__ = [
    "AgentError",
    "ClickOnRobot",
    "ContextMenu",
    "DefaultOptimizer",
    "Dispatched",
    "DragRobot",
    "DragStarted",
    "FleetSession",
    "InterpreterResponse",
    "InvalidEventSequence",
    "MENU_ITEMS",
    "MenuSelect",
    "NoCandidate",
    "OffMap",
    "OptimizerPlugin",
    "PlaceRobot",
    "PlanEntry",
    "Rejected",
    "RobotFaulted",
    "SessionConfig",
    "UIEvent",
    "UnknownRobot",
    "default_optimizer",
    "nearest_landmark_id",
]
