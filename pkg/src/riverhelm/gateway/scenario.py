"""Headless scenario runner on a purely simulated clock.

Scripts are JSON lines, one action per line, sorted and applied by `t`:

    {"t": 0,  "action": "deploy", "robot": "sub1", "at": "A"}
    {"t": 0,  "action": "inject_failure", "robot": "sub1", "flag": "communication", "value": true}
    {"t": 1,  "action": "command", "robot": "sub1", "event": {"type": "drag_robot", "target": {"lat": ..., "lon": ...}}}
    {"t": 50, "action": "assert", "robot": "sub1", "check": "guard_state", "equals": "Anchoring"}
    {"t": 60, "action": "acknowledge", "robot": "sub1"}
    {"t": 90, "action": "run_until"}

There is no wall-clock anywhere: time advances in fixed `step_dt` chunks
until each line's `t` is reached. The exit code is 0 iff every assertion
passed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..agents.events import AgentError
from ..agents.session import SessionConfig
from ..guard.fsm import GuardConfig, NotAcknowledgeable
from ..mdl import distance_m, parse_mdl
from ..mdl.errors import MdlError
from ..mdl.model import GeoCoordinate
from ..sim.world import SimConfig
from .eventlog import EventLog
from .runtime import BadEvent, GatewayRuntime


class ScenarioError(Exception):
    """Unusable script or map (exit code 2 territory)."""


@dataclass
class AssertionOutcome:
    t: float
    robot: str | None
    check: str
    ok: bool
    detail: str

    def as_dict(self) -> dict:
        return {"t": self.t, "robot": self.robot, "check": self.check, "ok": self.ok, "detail": self.detail}


@dataclass
class ScenarioResult:
    exit_code: int
    report: dict
    runtime: GatewayRuntime
    outcomes: list[AssertionOutcome] = field(default_factory=list)


def _load_script(path: Path) -> list[dict]:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(f"cannot read script {path}: {exc}") from None
    lines: list[dict] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        raw = raw.strip()
        if not raw or raw.startswith("#"):
            continue
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"{path}:{lineno}: bad JSON: {exc}") from None
        if not isinstance(data, dict) or "action" not in data:
            raise ScenarioError(f"{path}:{lineno}: each line needs an 'action'")
        data.setdefault("t", 0.0)
        try:
            data["t"] = float(data["t"])
        except (TypeError, ValueError):
            raise ScenarioError(f"{path}:{lineno}: 't' must be a number") from None
        data["_line"] = lineno
        lines.append(data)
    lines.sort(key=lambda d: (d["t"], d["_line"]))
    return lines


def _check_assertion(runtime: GatewayRuntime, line: dict) -> AssertionOutcome:
    session = runtime.session
    check = line.get("check")
    robot = line.get("robot")
    t = session.t

    def outcome(ok: bool, detail: str) -> AssertionOutcome:
        return AssertionOutcome(t=t, robot=robot, check=str(check), ok=ok, detail=detail)

    try:
        if check == "guard_state":
            state = session.guard.status(robot).state
            return outcome(state == line["equals"], f"state={state}, expected {line['equals']}")
        if check == "anchored":
            value = session.world.robot(robot).anchored
            return outcome(value == bool(line["equals"]), f"anchored={value}")
        if check == "parked_at":
            value = session.world.robot(robot).parked_at
            return outcome(value == line["equals"], f"parked_at={value}, expected {line['equals']}")
        if check == "cause_present":
            causes = session.guard.status(robot).causes
            return outcome(line["cause"] in causes, f"causes={sorted(causes)}")
        if check == "cause_absent":
            causes = session.guard.status(robot).causes
            return outcome(line["cause"] not in causes, f"causes={sorted(causes)}")
        if check == "position_within":
            position = session.world.robot(robot).position
            if "landmark" in line:
                ref = session.doc.landmark(line["landmark"]).position
            else:
                ref = GeoCoordinate(line["lat"], line["lon"])
            d = distance_m(position, ref)
            limit = float(line["meters"])
            return outcome(d <= limit, f"{d:.2f} m from target (limit {limit} m)")
        if check == "fix_count":
            fixes = [r for r in runtime.log.records() if r.kind == "gps_fix" and r.payload["robot_id"] == robot]
            return outcome(len(fixes) == int(line["equals"]), f"{len(fixes)} fixes")
        if check == "fix_times":
            times = [r.payload["timestamp"] for r in runtime.log.records()
                     if r.kind == "gps_fix" and r.payload["robot_id"] == robot]
            expected = [float(x) for x in line["equals"]]
            return outcome(times == expected, f"times={times}, expected {expected}")
        if check == "fuel_at_least":
            fuel = session.world.robot(robot).fuel
            return outcome(fuel >= float(line["value"]), f"fuel={fuel:.4f}")
        return outcome(False, f"unknown check {check!r}")
    except KeyError as exc:
        return outcome(False, f"assertion refers to unknown key/id: {exc}")


def run_scenario(
    map_path: str | Path,
    script_path: str | Path,
    *,
    step_dt: float = 1.0,
    sim_config: SimConfig | None = None,
    guard_config: GuardConfig | None = None,
    session_config: SessionConfig | None = None,
    log_path: str | Path | None = None,
    report_path: str | Path | None = None,
) -> ScenarioResult:
    map_path = Path(map_path)
    script_path = Path(script_path)
    try:
        doc = parse_mdl(map_path.read_text(encoding="utf-8")).document
    except OSError as exc:
        raise ScenarioError(f"cannot read map {map_path}: {exc}") from None
    except MdlError as exc:
        raise ScenarioError(f"invalid map {map_path}: {exc}") from None

    lines = _load_script(script_path)
    runtime = GatewayRuntime(
        doc,
        sim_config=sim_config,
        guard_config=guard_config,
        session_config=session_config,
        log=EventLog(log_path),
    )

    outcomes: list[AssertionOutcome] = []
    for line in lines:
        target_t = line["t"]
        while runtime.session.t < target_t - 1e-9:
            runtime.advance(min(step_dt, target_t - runtime.session.t))
        action = line["action"]
        if action == "assert":
            outcomes.append(_check_assertion(runtime, line))
        elif action == "run_until":
            pass
        elif action in ("deploy", "inject_failure", "acknowledge"):
            payload = {k: v for k, v in line.items() if k not in ("action", "t", "_line", "robot")}
            payload["type"] = action
            payload["robot_id"] = line.get("robot")
            try:
                runtime.apply_ui_event(payload)
            except (BadEvent, AgentError, NotAcknowledgeable, ValueError) as exc:
                raise ScenarioError(f"{script_path}:{line['_line']}: {exc}") from None
        elif action == "command":
            event = dict(line.get("event") or {})
            event["robot_id"] = line.get("robot")
            try:
                runtime.apply_ui_event(event)
            except BadEvent as exc:
                raise ScenarioError(f"{script_path}:{line['_line']}: {exc}") from None
            except (AgentError, NotAcknowledgeable):
                pass  # domain rejection: recorded in the log, scenario goes on
        else:
            raise ScenarioError(f"{script_path}:{line['_line']}: unknown action {action!r}")

    passed = all(o.ok for o in outcomes)
    report = {
        "map": str(map_path),
        "script": str(script_path),
        "assertions": [o.as_dict() for o in outcomes],
        "passed": passed,
        "final_t": runtime.session.t,
        "records": len(runtime.log.records()),
    }
    if report_path is not None:
        Path(report_path).parent.mkdir(parents=True, exist_ok=True)
        Path(report_path).write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
    runtime.log.close()
    return ScenarioResult(exit_code=0 if passed else 1, report=report, runtime=runtime, outcomes=outcomes)
