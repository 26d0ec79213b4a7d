"""Fleet session: one stationary agent per robot, a fixed-rate GPS poller,
and the event interpreter, all driving a single simulated world.

Message discipline: operator events come in as `UIEvent`s, every actuation
leaves as a `RoboticCommand`, and robot health comes back as observations
fed to the exception guard. The interpreter never touches robot state
directly. While a robot's guard is non-nominal the guard owns it and
operator events bounce with `RobotFaulted`.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field

from ..guard.fsm import ExceptionEvent, ExceptionGuard, GuardConfig
from ..mdl import geometry, routing
from ..mdl.errors import NoRoute, OffRoute
from ..mdl.model import FlowSegment, GeoCoordinate, Landmark, MapDocument, MdlAnnotation
from ..sim import commands as cmds
from ..sim.world import (
    AnchorRefused,
    CommTimeout,
    CommandError,
    GpsFix,
    GpsUnavailable,
    RobotState,
    SimConfig,
    World,
)
from .events import (
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
from .optimizer import DefaultOptimizer, OptimizerPlugin, nearest_landmark_id


@dataclass(frozen=True)
class SessionConfig:
    poll_interval: float = 15.0
    per_robot_intervals: dict[str, float] = field(default_factory=dict)
    snap_radius_m: float = 50.0
    corridor_m: float = 100.0
    cruise_speed: float | None = None  # None: simulator max speed

    def interval_for(self, robot_id: str) -> float:
        return self.per_robot_intervals.get(robot_id, self.poll_interval)


@dataclass
class PlanEntry:
    command: cmds.RoboticCommand
    flow_id: str | None = None


@dataclass
class _Agent:
    robot_id: str
    display_position: GeoCoordinate
    interval: float
    next_poll: float
    last_fix: GpsFix | None = None
    last_ack: float = 0.0
    pending_drag: GeoCoordinate | None = None
    plan: deque[PlanEntry] = field(default_factory=deque)
    active: PlanEntry | None = None
    plan_owner: str | None = None
    active_flow: str | None = None


class FleetSession:
    """Owns the world; advance it with `advance`, drive it with `handle_event`."""

    def __init__(
        self,
        doc: MapDocument,
        *,
        sim_config: SimConfig | None = None,
        guard_config: GuardConfig | None = None,
        session_config: SessionConfig | None = None,
        optimizer: OptimizerPlugin | None = None,
        sink=None,
    ):
        self.doc = doc
        self.world = World(doc, sim_config)
        self.guard = ExceptionGuard(guard_config)
        self.config = session_config or SessionConfig()
        self.optimizer = optimizer or DefaultOptimizer()
        self._sink = sink
        self._agents: dict[str, _Agent] = {}
        self._synthetic_n = 0
        if self.config.poll_interval <= 0:
            raise ValueError("poll interval must be positive")
        if self.guard.config.comm_timeout < self.config.poll_interval:
            raise ValueError("comm_timeout must be at least the poll interval")

    # ---------------------------------------------------------------- fleet

    def add_robot(
        self,
        robot_id: str,
        at: str | GeoCoordinate,
        *,
        fuel: float = 1.0,
        anchor_operational: bool = True,
    ) -> None:
        position = self.doc.landmark(at).position if isinstance(at, str) else at
        interval = self.config.interval_for(robot_id)
        if self.guard.config.comm_timeout < interval:
            raise ValueError("comm_timeout must be at least the poll interval")
        self.world.add_robot(RobotState(
            id=robot_id,
            position=position,
            fuel=fuel,
            anchor_operational=anchor_operational,
        ))
        self.guard.register(robot_id, now=self.world.t)
        self._agents[robot_id] = _Agent(
            robot_id=robot_id,
            display_position=position,
            interval=interval,
            next_poll=self.world.t + interval,
            last_ack=self.world.t,
        )

    def robot_ids(self) -> list[str]:
        return sorted(self._agents)

    def _agent(self, robot_id: str) -> _Agent:
        try:
            return self._agents[robot_id]
        except KeyError:
            raise UnknownRobot(robot_id) from None

    @property
    def t(self) -> float:
        return self.world.t

    # ----------------------------------------------------------------- time

    def advance(self, dt: float) -> None:
        """One simulation step plus everything scheduled behind it."""
        self.world.step(dt)
        now = self.world.t
        for rid in self.robot_ids():
            self._progress_plan(rid)
        for rid in self.robot_ids():
            agent = self._agents[rid]
            while agent.next_poll <= now:  # fixed-rate: deadlines never drift
                self._poll(rid, now)
                agent.next_poll += agent.interval
        for rid in self.robot_ids():
            agent = self._agents[rid]
            if now - agent.last_ack >= self.guard.config.comm_timeout:
                self._observe(rid, "comm_silent", now)
        self._handle_guard_events(self.guard.tick(now), now)

    # --------------------------------------------------------------- polling

    def _poll(self, robot_id: str, now: float) -> None:
        agent = self._agents[robot_id]
        try:
            fix = self.world.execute(robot_id, cmds.GetCoordinates())
        except CommTimeout:
            return  # silence is diagnosed by the comm timeout, not per poll
        except GpsUnavailable:
            agent.last_ack = now
            self._observe(robot_id, "gps_failed", now)
            self._observe_flags(robot_id, now, gps_ok=False)
            return
        agent.last_ack = now
        agent.last_fix = fix
        agent.display_position = fix.position
        self._emit("gps_fix", {
            "robot_id": robot_id,
            "lat": fix.position.lat,
            "lon": fix.position.lon,
            "depth": fix.position.depth,
            "timestamp": fix.timestamp,
        })
        self._observe(robot_id, "gps_ok", now)
        self._observe_flags(robot_id, now, gps_ok=True)
        self._emit_snapshot(robot_id)

    def _observe_flags(self, robot_id: str, now: float, *, gps_ok: bool) -> None:
        flags = self.world.telemetry(robot_id)
        if flags.sensor_power:
            self._observe(robot_id, "sensor_power_failed", now)
        if flags.propulsion:
            self._observe(robot_id, "propulsion_failed", now)
        if gps_ok and not flags.any():
            self._observe(robot_id, "flags_cleared", now)

    # ----------------------------------------------------- guard interaction

    def _observe(self, robot_id: str, observation: str, now: float) -> None:
        events = self.guard.observe(robot_id, observation, now)
        self._handle_guard_events(events, now)

    def _handle_guard_events(self, events: list[ExceptionEvent], now: float) -> None:
        for event in events:
            self._emit("exception_event", event.as_dict())
            entered = event.to_state != event.from_state  # self loops are cause updates
            if entered and event.to_state == "Anchoring":
                self._attempt_anchor(event.robot_id, now)
            elif entered and event.to_state == "AutoParking":
                self._start_auto_park(event.robot_id)
            self._emit_snapshot(event.robot_id)

    def _attempt_anchor(self, robot_id: str, now: float) -> None:
        ok, error = self._execute_logged(robot_id, cmds.Anchor())
        if ok:
            self._observe(robot_id, "anchor_confirmed", now)
        elif isinstance(error, AnchorRefused):
            self._observe(robot_id, "anchor_refused", now)
        # CommTimeout: the anchor deadline will escalate

    def _start_auto_park(self, robot_id: str) -> None:
        robot = self.world.robot(robot_id)
        terminal_id, path = self._best_fuel_terminal(robot)
        entries: list[PlanEntry] = []
        if robot.anchored:
            entries.append(PlanEntry(cmds.ReleaseAnchor()))
        if path is not None:
            entries += self._leg_entries(robot, path)
        else:  # unrouteable: drive straight at the terminal
            terminal = self.doc.landmark(terminal_id)
            entries.append(PlanEntry(cmds.MoveTo(terminal.position, self._cruise_speed())))
        entries.append(PlanEntry(cmds.Park(terminal_id)))
        self._set_plan(robot_id, entries, owner="guard")

    def _best_fuel_terminal(self, robot: RobotState) -> tuple[str, list[str] | None]:
        terminals = self.doc.fuel_terminals()
        start = nearest_landmark_id(self.doc, robot)
        routed: list[tuple[float, str, list[str]]] = []
        for term in terminals:
            try:
                path = routing.route_to(self.doc, start, term.id)
            except NoRoute:
                continue
            routed.append((routing.route_cost_m(self.doc, path), term.id, path))
        if routed:
            cost, term_id, path = min(routed, key=lambda x: (x[0], x[1]))
            return term_id, path
        best = min(terminals, key=lambda l: (geometry.distance_m(robot.position, l.position), l.id))
        return best.id, None

    def acknowledge(self, robot_id: str, operator_id: str) -> ExceptionEvent:
        self._agent(robot_id)
        event = self.guard.acknowledge(robot_id, operator_id, self.world.t)
        self._emit("exception_event", event.as_dict())
        self._emit_snapshot(robot_id)
        return event

    def inject_failure(self, robot_id: str, flag: str, value: bool) -> None:
        self._agent(robot_id)
        self.world.inject_failure(robot_id, flag, value)

    def exception_history(self, robot_id: str) -> list[ExceptionEvent]:
        self._agent(robot_id)
        return self.guard.history(robot_id)

    # ------------------------------------------------------------ event layer

    def handle_event(self, ev: UIEvent) -> InterpreterResponse:
        agent = self._agent(ev.robot_id)
        if self.guard.owns(ev.robot_id):
            raise RobotFaulted(ev.robot_id, self.guard.status(ev.robot_id).state)

        if isinstance(ev, ClickOnRobot):
            try:
                scale = geometry.query_scale(self.doc, agent.display_position)
            except geometry.NoScaleRegion:
                scale = None
            return ContextMenu(items=MENU_ITEMS, scale_denominator=scale)

        if isinstance(ev, DragRobot):
            if not any(r.contains(ev.target) for r in self.doc.scale_regions):
                raise OffMap(f"({ev.target.lat}, {ev.target.lon}) is outside every scale region")
            agent.pending_drag = ev.target
            return DragStarted(ev.robot_id)

        if isinstance(ev, PlaceRobot):
            if agent.pending_drag is None:
                raise InvalidEventSequence(f"no drag pending for {ev.robot_id}")
            target = agent.pending_drag
            agent.pending_drag = None
            dest_id = self._resolve_drop(target)
            return self._dispatch_route(ev.robot_id, dest_id)

        if isinstance(ev, MenuSelect):
            if ev.item not in MENU_ITEMS:
                raise ValueError(f"unknown menu item: {ev.item!r}")
            if ev.item == "park":
                robot = self.world.robot(ev.robot_id)
                terminal_id, path = self._best_fuel_terminal(robot)
                if path is None:
                    return Rejected("no_route")
                return self._dispatch_route(ev.robot_id, terminal_id, park_at=terminal_id)
            if ev.item == "compute_optimal_flow":
                try:
                    dest_id = self.optimizer.suggest_target(self.doc, self.world.robot(ev.robot_id))
                except NoCandidate as exc:
                    return Rejected(str(exc))
                if not self.doc.has_landmark(dest_id):
                    return Rejected(f"optimizer suggested unknown landmark {dest_id!r}")
                return self._dispatch_route(ev.robot_id, dest_id)
            if ev.item == "anchor":
                return self._immediate(ev.robot_id, cmds.Anchor())
            if ev.item == "release":
                return self._immediate(ev.robot_id, cmds.ReleaseAnchor())

        raise TypeError(f"not a UI event: {ev!r}")

    def _immediate(self, robot_id: str, command: cmds.RoboticCommand) -> InterpreterResponse:
        ok, error = self._execute_logged(robot_id, command)
        if ok:
            self._emit_snapshot(robot_id)
            return Dispatched((command,))
        if isinstance(error, CommTimeout):
            return Rejected("comm_timeout")
        if isinstance(error, AnchorRefused):
            return Rejected("anchor_refused")
        return Rejected(type(error).__name__)

    def _dispatch_route(self, robot_id: str, dest_id: str, park_at: str | None = None) -> InterpreterResponse:
        robot = self.world.robot(robot_id)
        start = nearest_landmark_id(self.doc, robot)
        try:
            path = routing.route_to(self.doc, start, dest_id)
        except NoRoute:
            return Rejected("no_route")
        entries: list[PlanEntry] = []
        if robot.anchored:
            entries.append(PlanEntry(cmds.ReleaseAnchor()))
        entries += self._leg_entries(robot, path)
        if park_at is not None:
            entries.append(PlanEntry(cmds.Park(park_at)))
        self._set_plan(robot_id, entries, owner="operator")
        self._emit_snapshot(robot_id)
        return Dispatched(tuple(e.command for e in entries))

    def _leg_entries(self, robot: RobotState, path: list[str]) -> list[PlanEntry]:
        """MoveTo per polyline waypoint of every leg; plus the approach hop
        to the first node when the robot starts away from it."""
        speed = self._cruise_speed()
        entries: list[PlanEntry] = []
        start = self.doc.landmark(path[0])
        if geometry.distance_m(robot.position, start.position) > self.world.config.arrival_radius_m:
            entries.append(PlanEntry(cmds.MoveTo(start.position, speed)))
        for u, v in zip(path, path[1:]):
            flow = routing.best_flow_for_leg(self.doc, u, v)
            for wp in flow.waypoint_ids[1:]:
                entries.append(PlanEntry(cmds.MoveTo(self.doc.landmark(wp).position, speed), flow.id))
        return entries

    def _cruise_speed(self) -> float:
        return self.config.cruise_speed or self.world.config.max_speed_mps

    def _resolve_drop(self, target: GeoCoordinate) -> str:
        """Snap to the nearest landmark, or grow a synthetic one at the drop
        point wired into the flow graph."""
        nearest = min(
            self.doc.landmarks,
            key=lambda l: (geometry.distance_m(target, l.position), l.id),
        )
        if geometry.distance_m(target, nearest.position) <= self.config.snap_radius_m:
            return nearest.id

        waypoint_ids = sorted({w for f in self.doc.flows for w in f.waypoint_ids})
        anchor_id = min(
            waypoint_ids,
            key=lambda w: (geometry.distance_m(target, self.doc.landmark(w).position), w),
        )
        self._synthetic_n += 1
        drop_id = f"drop-{self._synthetic_n}"
        while self.doc.has_landmark(drop_id):
            self._synthetic_n += 1
            drop_id = f"drop-{self._synthetic_n}"
        drop = Landmark(id=drop_id, kind="marker", position=target, label="drop point")
        link = FlowSegment(
            id=f"dropflow-{self._synthetic_n}",
            from_id=anchor_id,
            to_id=drop_id,
            waypoint_ids=(anchor_id, drop_id),
            v_from=(0.0, 0.0),
            v_to=(0.0, 0.0),
        )
        self.doc = self.doc.with_extra(landmarks=(drop,), flows=(link,))
        self.world.doc = self.doc
        return drop_id

    # ------------------------------------------------------------- plan pump

    def _set_plan(self, robot_id: str, entries: list[PlanEntry], owner: str) -> None:
        agent = self._agents[robot_id]
        if agent.active is not None or agent.plan:
            self._execute_logged(robot_id, cmds.Halt())  # preemption
        agent.plan = deque(entries)
        agent.active = None
        agent.plan_owner = owner
        self._progress_plan(robot_id)

    def _progress_plan(self, robot_id: str) -> None:
        agent = self._agents[robot_id]
        if agent.active is not None:
            if not isinstance(agent.active.command, cmds.MoveTo) or self.world.arrived(robot_id):
                agent.active = None
        while agent.active is None and agent.plan:
            entry = agent.plan[0]
            ok, error = self._execute_logged(robot_id, entry.command)
            if isinstance(error, CommTimeout):
                return  # leave the plan queued; retry after the next step
            agent.plan.popleft()
            if not ok:
                agent.plan.clear()  # refusal aborts the remaining plan
                agent.plan_owner = None
                return
            if entry.flow_id is not None:
                agent.active_flow = entry.flow_id
            if isinstance(entry.command, cmds.MoveTo):
                if not self.world.arrived(robot_id):
                    agent.active = entry
            elif isinstance(entry.command, cmds.Park) and agent.plan_owner == "guard":
                self._observe(robot_id, "park_confirmed", self.world.t)
        if agent.active is None and not agent.plan:
            agent.plan_owner = None

    def _execute_logged(self, robot_id: str, command: cmds.RoboticCommand) -> tuple[bool, CommandError | None]:
        outcome: CommandError | None = None
        try:
            self.world.execute(robot_id, command)
        except CommandError as exc:
            outcome = exc
        if not isinstance(command, cmds.GetCoordinates):
            payload = {"robot_id": robot_id, **cmds.command_to_json(command)}
            payload["ok"] = outcome is None
            if outcome is not None:
                payload["error"] = type(outcome).__name__
            self._emit("command", payload)
        if outcome is None:
            self._agents[robot_id].last_ack = self.world.t
            return True, None
        if not isinstance(outcome, CommTimeout):
            self._agents[robot_id].last_ack = self.world.t
        return False, outcome

    # ------------------------------------------------------------- snapshots

    def _emit(self, kind: str, payload: dict) -> None:
        if self._sink is not None:
            self._sink(kind, payload)

    def robot_snapshot(self, robot_id: str) -> dict:
        """Registry view of one robot: last-known position plus state."""
        agent = self._agent(robot_id)
        robot = self.world.robot(robot_id)
        status = self.guard.status(robot_id)
        return {
            "id": robot_id,
            "position": {
                "lat": agent.display_position.lat,
                "lon": agent.display_position.lon,
                "depth": agent.display_position.depth,
            },
            "velocity": list(robot.velocity),
            "anchored": robot.anchored,
            "parked_at": robot.parked_at,
            "fuel": robot.fuel,
            "failures": robot.failures.as_dict(),
            "last_fix_time": agent.last_fix.timestamp if agent.last_fix else None,
            "guard_state": status.state,
            "causes": sorted(status.causes),
            "acknowledgeable": status.state in ("Anchored", "Parked", "Distress")
            and not (status.causes & {"communication", "gps", "sensor_power", "propulsion"}),
        }

    def robot_snapshots(self) -> list[dict]:
        return [self.robot_snapshot(rid) for rid in self.robot_ids()]

    def _emit_snapshot(self, robot_id: str) -> None:
        self._emit("robot_snapshot", self.robot_snapshot(robot_id))

    def registry_snapshot(self) -> str:
        """Canonical JSON of the whole registry, for replay comparison."""
        return json.dumps(
            {"t": self.world.t, "robots": self.robot_snapshots()},
            sort_keys=True,
            separators=(",", ":"),
        )

    def annotated_map(self) -> tuple[MapDocument, tuple[MdlAnnotation, ...]]:
        annotations = []
        for rid in self.robot_ids():
            agent = self._agents[rid]
            flow_id = agent.active_flow
            annotation = MdlAnnotation(robot_id=rid, active_flow=flow_id)
            if flow_id is not None:
                try:
                    annotation = geometry.annotate_for_robot(
                        self.doc, flow_id, rid, agent.display_position, self.config.corridor_m
                    )
                except OffRoute:
                    pass
            annotations.append(annotation)
        return self.doc, tuple(annotations)
