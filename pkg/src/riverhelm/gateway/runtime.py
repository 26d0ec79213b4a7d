"""Gateway runtime: a fleet session wired to the append-only log.

Inputs (ticks, operator/UI actions, failure injections, deployments) are
logged before they are applied; everything the session emits (fixes,
commands, exception events, snapshots) is logged as it happens. Replaying
just the input records through a fresh runtime reproduces the same world,
which is what the replay test and `replay_records` rely on.
"""

from __future__ import annotations

from ..agents.events import (
    AgentError,
    ClickOnRobot,
    DragRobot,
    MenuSelect,
    PlaceRobot,
    UIEvent,
)
from ..agents.session import FleetSession, SessionConfig
from ..agents.optimizer import OptimizerPlugin
from ..guard.fsm import GuardConfig, NotAcknowledgeable
from ..mdl.model import GeoCoordinate, MapDocument
from ..sim.commands import command_to_json
from ..sim.world import SimConfig
from .eventlog import EventLog, LogRecord


class BadEvent(Exception):
    """Malformed wire event (unknown type, missing fields)."""


def ui_event_from_json(robot_id: str, data: dict) -> UIEvent:
    kind = data.get("type")
    if kind == "click_on_robot":
        return ClickOnRobot(robot_id)
    if kind == "drag_robot":
        target = data.get("target")
        if not isinstance(target, dict) or "lat" not in target or "lon" not in target:
            raise BadEvent("drag_robot needs a target {lat, lon}")
        try:
            coordinate = GeoCoordinate(target["lat"], target["lon"], target.get("depth", 0.0))
        except (TypeError, ValueError) as exc:
            raise BadEvent(f"bad drag target: {exc}") from None
        return DragRobot(robot_id, coordinate)
    if kind == "place_robot":
        return PlaceRobot(robot_id)
    if kind == "menu_select":
        item = data.get("item")
        if not isinstance(item, str):
            raise BadEvent("menu_select needs an item")
        return MenuSelect(robot_id, item)
    raise BadEvent(f"unknown event type: {kind!r}")


def response_to_json(response) -> dict:
    from ..agents.events import ContextMenu, Dispatched, DragStarted, Rejected

    if isinstance(response, ContextMenu):
        return {
            "response": "context_menu",
            "items": list(response.items),
            "scale_denominator": response.scale_denominator,
        }
    if isinstance(response, DragStarted):
        return {"response": "drag_started", "robot_id": response.robot_id}
    if isinstance(response, Dispatched):
        return {"response": "dispatched", "commands": [command_to_json(c) for c in response.commands]}
    if isinstance(response, Rejected):
        return {"response": "rejected", "reason": response.reason}
    raise TypeError(f"not an interpreter response: {response!r}")


class GatewayRuntime:
    """Single-owner wrapper around a session plus its log."""

    def __init__(
        self,
        doc: MapDocument,
        *,
        sim_config: SimConfig | None = None,
        guard_config: GuardConfig | None = None,
        session_config: SessionConfig | None = None,
        optimizer: OptimizerPlugin | None = None,
        log: EventLog | None = None,
    ):
        self.log = log if log is not None else EventLog()
        self.session = FleetSession(
            doc,
            sim_config=sim_config,
            guard_config=guard_config,
            session_config=session_config,
            optimizer=optimizer,
            sink=self._sink,
        )

    def _sink(self, kind: str, payload: dict) -> None:
        self.log.append(kind, payload, timestamp=self.session.t)

    # ---------------------------------------------------------------- inputs

    def advance(self, dt: float, *, log_input: bool = True) -> None:
        if log_input:
            self.log.append("tick", {"dt": dt}, timestamp=self.session.t)
        self.session.advance(dt)

    def apply_ui_event(self, payload: dict, *, log_input: bool = True) -> dict:
        """Apply one wire-form operator input; logs it first.

        Raises BadEvent for malformed payloads and the session's typed
        errors (UnknownRobot, RobotFaulted, ...) for domain rejections.
        """
        action = payload.get("type")
        if action not in (
            "deploy", "inject_failure", "acknowledge",
            "click_on_robot", "drag_robot", "place_robot", "menu_select",
        ):
            raise BadEvent(f"unknown event type: {action!r}")
        robot_id = payload.get("robot_id")
        if not isinstance(robot_id, str) or not robot_id:
            raise BadEvent("event needs a robot_id")
        if log_input:
            self.log.append("ui_event", payload, timestamp=self.session.t)

        if action == "deploy":
            at = payload.get("at")
            if not isinstance(at, str):
                raise BadEvent("deploy needs a landmark id in 'at'")
            try:
                self.session.add_robot(
                    robot_id,
                    at,
                    fuel=float(payload.get("fuel", 1.0)),
                    anchor_operational=bool(payload.get("anchor_operational", True)),
                )
            except KeyError:
                raise BadEvent(f"deploy at unknown landmark {at!r}") from None
            return {"response": "deployed", "robot_id": robot_id}

        if action == "inject_failure":
            flag = payload.get("flag")
            if not isinstance(flag, str):
                raise BadEvent("inject_failure needs a flag")
            self.session.inject_failure(robot_id, flag, bool(payload.get("value", True)))
            return {"response": "failure_injected", "robot_id": robot_id, "flag": flag,
                    "value": bool(payload.get("value", True))}

        if action == "acknowledge":
            event = self.session.acknowledge(robot_id, str(payload.get("operator_id", "operator")))
            return {"response": "acknowledged", "event": event.as_dict()}

        event = ui_event_from_json(robot_id, payload)
        response = self.session.handle_event(event)
        return response_to_json(response)


def replay_records(
    doc: MapDocument,
    records: list[LogRecord],
    *,
    sim_config: SimConfig | None = None,
    guard_config: GuardConfig | None = None,
    session_config: SessionConfig | None = None,
    optimizer: OptimizerPlugin | None = None,
) -> GatewayRuntime:
    """Rebuild a runtime by re-applying the input records in sequence order.

    Domain rejections are swallowed: they did not mutate the original world
    either. The derived records regenerate as side effects.
    """
    runtime = GatewayRuntime(
        doc,
        sim_config=sim_config,
        guard_config=guard_config,
        session_config=session_config,
        optimizer=optimizer,
    )
    for record in sorted(records, key=lambda r: r.seq):
        if record.kind == "tick":
            runtime.advance(record.payload["dt"], log_input=False)
        elif record.kind == "ui_event":
            try:
                runtime.apply_ui_event(record.payload, log_input=False)
            except (AgentError, NotAcknowledgeable, BadEvent, ValueError):
                pass
    return runtime
