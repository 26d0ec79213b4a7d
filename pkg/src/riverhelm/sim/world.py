"""Deterministic discrete-time river simulator.

First-order point-mass kinematics: each unanchored, unparked robot moves by
(commanded velocity + ambient water flow) * dt per step. Commanded velocity
is simple pursuit toward the guidance target, capped so a step never
overshoots; within the arrival radius pursuit degenerates into station
keeping. Idle robots drift with the flow. The whole world is a single-owner
state machine: mutate it from one logical owner, hand out snapshots freely.
"""

from __future__ import annotations

import copy
import math
import random
from dataclasses import dataclass, field, replace

from ..mdl import geometry
from ..mdl.model import GeoCoordinate, MapDocument
from .commands import (
    Anchor,
    GetCoordinates,
    Halt,
    MoveTo,
    Park,
    ReleaseAnchor,
    RoboticCommand,
)

FAILURE_FLAG_NAMES = ("communication", "gps", "sensor_power", "propulsion")


class SimError(Exception):
    pass


class UnknownRobot(SimError):
    def __init__(self, robot_id: str):
        super().__init__(f"unknown robot: {robot_id}")
        self.robot_id = robot_id


class CommandError(SimError):
    """A command that reached the world but was not carried out."""


class CommTimeout(CommandError):
    """Communication failure: the command never reaches the robot."""


class GpsUnavailable(CommandError):
    pass


class AnchorRefused(CommandError):
    pass


class NotAtTerminal(CommandError):
    def __init__(self, distance_m: float):
        super().__init__(f"robot is {distance_m:.1f} m from the terminal")
        self.distance_m = distance_m


class BadSpeed(CommandError):
    pass


@dataclass
class FailureFlags:
    communication: bool = False
    gps: bool = False
    sensor_power: bool = False
    propulsion: bool = False

    def any(self) -> bool:
        return self.communication or self.gps or self.sensor_power or self.propulsion

    def as_dict(self) -> dict[str, bool]:
        return {name: getattr(self, name) for name in FAILURE_FLAG_NAMES}


@dataclass(frozen=True)
class GpsFix:
    robot_id: str
    position: GeoCoordinate
    timestamp: float


@dataclass
class RobotState:
    id: str
    position: GeoCoordinate
    velocity: tuple[float, float] = (0.0, 0.0)
    anchored: bool = False
    parked_at: str | None = None
    fuel: float = 1.0
    failures: FailureFlags = field(default_factory=FailureFlags)
    last_fix_time: float | None = None
    # simulator-only properties
    anchor_operational: bool = True
    guidance_target: GeoCoordinate | None = None
    guidance_speed: float = 0.0

    def __post_init__(self):
        if self.anchored and self.parked_at is not None:
            raise ValueError("anchored and parked are mutually exclusive")
        if not 0.0 <= self.fuel <= 1.0:
            raise ValueError(f"fuel out of range: {self.fuel}")


@dataclass(frozen=True)
class SimConfig:
    arrival_radius_m: float = 5.0
    max_speed_mps: float = 2.0
    fuel_burn_per_m: float = 0.001
    ambient_corridor_m: float = 100.0
    max_anchor_depth_m: float = 30.0
    gps_noise_radius_m: float = 0.0
    seed: int = 0


class World:
    """Map + robot fleet, advanced by `step` and actuated by `execute`."""

    def __init__(self, doc: MapDocument, config: SimConfig | None = None):
        self.doc = doc
        self.config = config or SimConfig()
        self.robots: dict[str, RobotState] = {}
        self.t = 0.0
        self._rng = random.Random(self.config.seed)

    def add_robot(self, robot: RobotState) -> None:
        if robot.id in self.robots:
            raise ValueError(f"duplicate robot id: {robot.id}")
        self.robots[robot.id] = robot

    def robot(self, robot_id: str) -> RobotState:
        try:
            return self.robots[robot_id]
        except KeyError:
            raise UnknownRobot(robot_id) from None

    def robot_ids(self) -> list[str]:
        return sorted(self.robots)

    # ------------------------------------------------------------------ step

    def step(self, dt: float) -> None:
        if dt <= 0:
            raise ValueError("dt must be positive")
        for robot_id in self.robot_ids():
            self._step_robot(self.robots[robot_id], dt)
        self.t += dt

    def _step_robot(self, r: RobotState, dt: float) -> None:
        if r.anchored or r.parked_at is not None:
            r.velocity = (0.0, 0.0)
            return
        vcx, vcy = self._commanded_velocity(r, dt)
        fx, fy = geometry.ambient_flow(self.doc, r.position, self.config.ambient_corridor_m)
        vx, vy = vcx + fx, vcy + fy
        r.position = geometry.offset_position(r.position, vx * dt, vy * dt)
        r.velocity = (vx, vy)
        burn = self.config.fuel_burn_per_m * math.hypot(vcx, vcy) * dt
        r.fuel = max(0.0, r.fuel - burn)

    def _commanded_velocity(self, r: RobotState, dt: float) -> tuple[float, float]:
        if r.guidance_target is None or r.failures.propulsion or r.fuel <= 0.0:
            return 0.0, 0.0
        dx, dy = geometry.to_local_xy(r.guidance_target, (r.position.lat, r.position.lon))
        d = math.hypot(dx, dy)
        if d == 0.0:
            return 0.0, 0.0
        speed = min(r.guidance_speed, self.config.max_speed_mps, d / dt)
        return dx / d * speed, dy / d * speed

    # -------------------------------------------------------------- commands

    def execute(self, robot_id: str, cmd: RoboticCommand) -> GpsFix | None:
        """Deliver a command; returns a GpsFix for GetCoordinates, else None.

        Raises CommTimeout before anything else when the robot's link is
        down: a silent robot acknowledges nothing.
        """
        r = self.robot(robot_id)
        if r.failures.communication:
            raise CommTimeout(f"no acknowledgement from {robot_id}")

        if isinstance(cmd, GetCoordinates):
            if r.failures.gps:
                raise GpsUnavailable(f"{robot_id} reports no GPS fix")
            pos = self._fix_position(r)
            r.last_fix_time = self.t
            return GpsFix(robot_id=robot_id, position=pos, timestamp=self.t)

        if isinstance(cmd, MoveTo):
            if not 0.0 < cmd.speed <= self.config.max_speed_mps:
                raise BadSpeed(f"speed {cmd.speed} outside (0, {self.config.max_speed_mps}]")
            r.parked_at = None  # undock on demand
            r.guidance_target = cmd.target
            r.guidance_speed = cmd.speed
            return None

        if isinstance(cmd, Anchor):
            if r.parked_at is not None:
                raise AnchorRefused(f"{robot_id} is docked at {r.parked_at}")
            if not r.anchor_operational:
                raise AnchorRefused(f"{robot_id} anchor gear inoperative")
            if r.position.depth > self.config.max_anchor_depth_m:
                raise AnchorRefused(
                    f"{robot_id} at depth {r.position.depth} m exceeds anchor limit "
                    f"{self.config.max_anchor_depth_m} m"
                )
            r.anchored = True
            r.guidance_target = None
            r.velocity = (0.0, 0.0)
            return None

        if isinstance(cmd, ReleaseAnchor):
            r.anchored = False
            return None

        if isinstance(cmd, Park):
            terminal = self.doc.landmark(cmd.terminal)
            d = geometry.distance_m(r.position, terminal.position)
            if d > self.config.arrival_radius_m:
                raise NotAtTerminal(d)
            r.anchored = False  # docking retracts the anchor
            r.parked_at = cmd.terminal
            r.guidance_target = None
            r.velocity = (0.0, 0.0)
            return None

        if isinstance(cmd, Halt):
            r.guidance_target = None
            return None

        raise TypeError(f"not a robotic command: {cmd!r}")

    def _fix_position(self, r: RobotState) -> GeoCoordinate:
        radius = self.config.gps_noise_radius_m
        if radius <= 0.0:
            return r.position
        angle = self._rng.uniform(0.0, 2.0 * math.pi)
        rho = radius * math.sqrt(self._rng.uniform(0.0, 1.0))
        return geometry.offset_position(r.position, rho * math.cos(angle), rho * math.sin(angle))

    def inject_failure(self, robot_id: str, flag: str, value: bool) -> None:
        r = self.robot(robot_id)
        if flag not in FAILURE_FLAG_NAMES:
            raise ValueError(f"unknown failure flag: {flag!r}")
        setattr(r.failures, flag, bool(value))

    def telemetry(self, robot_id: str) -> FailureFlags:
        """Health word riding every acknowledgement (caller saw a response)."""
        r = self.robot(robot_id)
        return replace(r.failures)

    # ------------------------------------------------------------- snapshots

    def distance_to_target(self, robot_id: str) -> float | None:
        r = self.robot(robot_id)
        if r.guidance_target is None:
            return None
        return geometry.distance_m(r.position, r.guidance_target)

    def arrived(self, robot_id: str) -> bool:
        d = self.distance_to_target(robot_id)
        return d is not None and d <= self.config.arrival_radius_m

    def snapshot(self, robot_id: str) -> RobotState:
        return copy.deepcopy(self.robot(robot_id))

    def snapshot_all(self) -> dict[str, RobotState]:
        return {rid: copy.deepcopy(self.robots[rid]) for rid in self.robot_ids()}
