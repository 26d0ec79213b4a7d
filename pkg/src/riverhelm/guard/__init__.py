"""Fault supervision: the per-robot exception state machine."""

from .fsm import (
    CAUSES,
    ExceptionEvent,
    ExceptionGuard,
    ExceptionStatus,
    FAILURE_CAUSES,
    GuardConfig,
    GuardError,
    NotAcknowledgeable,
    OBSERVATIONS,
    STATES,
    UnknownRobot,
    next_state,
    update_causes,
)

__all__ = [
    "CAUSES",
    "ExceptionEvent",
    "ExceptionGuard",
    "ExceptionStatus",
    "FAILURE_CAUSES",
    "GuardConfig",
    "GuardError",
    "NotAcknowledgeable",
    "OBSERVATIONS",
    "STATES",
    "UnknownRobot",
    "next_state",
    "update_causes",
]
