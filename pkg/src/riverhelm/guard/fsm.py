"""Per-robot fault supervisor.

Policy, in order of precedence:

1. Any observed failure (communication silence, GPS loss, sensor/power
   fault, propulsion fault) takes the robot away from the operator and
   attempts to anchor it.
2. If anchoring succeeds and the robot then sits anchored beyond the park
   timeout with a working drivetrain and link, it is routed to the nearest
   fuel rendezvous terminal and parked.
3. If anchoring is refused or times out, the robot auto-parks when it can
   still be driven (link up, propulsion up); otherwise it is in distress.

The machine is total: every (state, observation) pair has exactly one
successor. Cause bookkeeping is inferential: any acknowledgement-bearing
observation proves the link works and clears the communication cause.
"""

from __future__ import annotations

from dataclasses import dataclass, field

STATES = ("Nominal", "Anchoring", "Anchored", "AutoParking", "Parked", "Distress")

OBSERVATIONS = (
    "gps_ok",
    "gps_failed",
    "comm_silent",
    "sensor_power_failed",
    "propulsion_failed",
    "anchor_confirmed",
    "anchor_refused",
    "park_confirmed",
    "flags_cleared",
)

CAUSES = ("communication", "gps", "sensor_power", "propulsion", "timeout")
FAILURE_CAUSES = frozenset({"communication", "gps", "sensor_power", "propulsion"})

_FAILURE_OBS = frozenset({"gps_failed", "comm_silent", "sensor_power_failed", "propulsion_failed"})

# Every observation except comm_silent is a message FROM the robot, which
# proves the link is alive.
_ACK_BEARING = frozenset(OBSERVATIONS) - {"comm_silent"}


class GuardError(Exception):
    pass


class UnknownRobot(GuardError):
    def __init__(self, robot_id: str):
        super().__init__(f"guard knows no robot: {robot_id}")
        self.robot_id = robot_id


class NotAcknowledgeable(GuardError):
    pass


@dataclass(frozen=True)
class GuardConfig:
    comm_timeout: float = 45.0    # 3 missed polls at the default interval
    anchor_timeout: float = 60.0
    park_timeout: float = 300.0

    def __post_init__(self):
        if min(self.comm_timeout, self.anchor_timeout, self.park_timeout) <= 0:
            raise ValueError("guard timeouts must be positive")


@dataclass(frozen=True)
class ExceptionEvent:
    robot_id: str
    from_state: str
    to_state: str
    causes: frozenset[str]
    timestamp: float

    def as_dict(self) -> dict:
        return {
            "robot_id": self.robot_id,
            "from_state": self.from_state,
            "to_state": self.to_state,
            "causes": sorted(self.causes),
            "timestamp": self.timestamp,
        }


@dataclass
class ExceptionStatus:
    state: str = "Nominal"
    causes: frozenset[str] = frozenset()
    since: float = 0.0


@dataclass
class _RobotGuard:
    status: ExceptionStatus
    anchor_deadline: float | None = None
    park_deadline: float | None = None
    history: list[ExceptionEvent] = field(default_factory=list)


def update_causes(causes: frozenset[str], observation: str) -> frozenset[str]:
    c = set(causes)
    if observation in _ACK_BEARING:
        c.discard("communication")
    if observation == "gps_ok":
        c.discard("gps")
    elif observation == "gps_failed":
        c.add("gps")
    elif observation == "comm_silent":
        c.add("communication")
    elif observation == "sensor_power_failed":
        c.add("sensor_power")
    elif observation == "propulsion_failed":
        c.add("propulsion")
    elif observation == "flags_cleared":
        c -= {"gps", "sensor_power", "propulsion"}
    return frozenset(c)


def _escalate(causes: frozenset[str]) -> str:
    """Where a failed anchor attempt goes: park if drivable, else distress."""
    if "propulsion" in causes or "communication" in causes:
        return "Distress"
    return "AutoParking"


def next_state(state: str, observation: str, causes_after: frozenset[str]) -> str:
    """Successor state; total over STATES x OBSERVATIONS."""
    if state == "Nominal":
        return "Anchoring" if observation in _FAILURE_OBS else "Nominal"
    if state == "Anchoring":
        if observation == "anchor_confirmed":
            return "Anchored"
        if observation == "anchor_refused":
            return _escalate(causes_after)
        return "Anchoring"
    if state == "Anchored":
        return "Anchored"
    if state == "AutoParking":
        if observation == "park_confirmed":
            return "Parked"
        if observation == "comm_silent":
            return "Distress"  # moving robot went silent
        if observation == "propulsion_failed":
            return "Anchoring"  # cannot drive to the terminal; hold position
        return "AutoParking"
    if state == "Parked":
        return "Parked"
    if state == "Distress":
        return "Distress"
    raise ValueError(f"unknown state: {state!r}")


class ExceptionGuard:
    """Fault state machines for a fleet, one per registered robot."""

    def __init__(self, config: GuardConfig | None = None):
        self.config = config or GuardConfig()
        self._robots: dict[str, _RobotGuard] = {}

    def register(self, robot_id: str, now: float = 0.0) -> None:
        if robot_id in self._robots:
            raise ValueError(f"robot already registered: {robot_id}")
        self._robots[robot_id] = _RobotGuard(ExceptionStatus(since=now))

    def robot_ids(self) -> list[str]:
        return sorted(self._robots)

    def _guard(self, robot_id: str) -> _RobotGuard:
        try:
            return self._robots[robot_id]
        except KeyError:
            raise UnknownRobot(robot_id) from None

    def status(self, robot_id: str) -> ExceptionStatus:
        s = self._guard(robot_id).status
        return ExceptionStatus(state=s.state, causes=s.causes, since=s.since)

    def history(self, robot_id: str) -> list[ExceptionEvent]:
        return list(self._guard(robot_id).history)

    def owns(self, robot_id: str) -> bool:
        """Non-nominal robots belong to the guard, not the operator."""
        return self._guard(robot_id).status.state != "Nominal"

    # ---------------------------------------------------------- transitions

    def observe(self, robot_id: str, observation: str, now: float) -> list[ExceptionEvent]:
        if observation not in OBSERVATIONS:
            raise ValueError(f"unknown observation: {observation!r}")
        g = self._guard(robot_id)
        causes = update_causes(g.status.causes, observation)
        state = next_state(g.status.state, observation, causes)
        return self._commit(robot_id, g, state, causes, now)

    def tick(self, now: float) -> list[ExceptionEvent]:
        """Fire exactly the time-based transitions whose deadline has passed."""
        events: list[ExceptionEvent] = []
        for robot_id in self.robot_ids():
            g = self._robots[robot_id]
            st = g.status
            if st.state == "Anchoring" and g.anchor_deadline is not None and now >= g.anchor_deadline:
                g.anchor_deadline = None
                causes = frozenset(st.causes | {"timeout"})
                events += self._commit(robot_id, g, _escalate(causes), causes, now)
            elif st.state == "Anchored" and g.park_deadline is not None and now >= g.park_deadline:
                if "propulsion" not in st.causes and "communication" not in st.causes:
                    g.park_deadline = None
                    causes = frozenset(st.causes | {"timeout"})
                    events += self._commit(robot_id, g, "AutoParking", causes, now)
        return events

    def acknowledge(self, robot_id: str, operator_id: str, now: float) -> ExceptionEvent:
        """Operator takes a recovered robot back; requires a resting state
        and every failure cause cleared."""
        g = self._guard(robot_id)
        st = g.status
        if st.state not in ("Anchored", "Parked", "Distress"):
            raise NotAcknowledgeable(f"{robot_id} is {st.state}; wait for a resting state")
        remaining = st.causes & FAILURE_CAUSES
        if remaining:
            raise NotAcknowledgeable(f"{robot_id} still faulted: {', '.join(sorted(remaining))}")
        events = self._commit(robot_id, g, "Nominal", frozenset(), now)
        return events[0]

    def _commit(
        self,
        robot_id: str,
        g: _RobotGuard,
        state: str,
        causes: frozenset[str],
        now: float,
    ) -> list[ExceptionEvent]:
        old = g.status
        if state == old.state:
            if state == "Nominal":
                causes = frozenset()  # Nominal <=> no causes
            if causes == old.causes:
                return []
            # cause change without a state change: logged as a self
            # transition so the event log reconstructs the status exactly
            g.status = ExceptionStatus(state=state, causes=causes, since=old.since)
            event = ExceptionEvent(robot_id=robot_id, from_state=old.state,
                                   to_state=state, causes=causes, timestamp=now)
            g.history.append(event)
            return [event]
        event = ExceptionEvent(
            robot_id=robot_id,
            from_state=old.state,
            to_state=state,
            causes=causes,
            timestamp=now,
        )
        g.status = ExceptionStatus(state=state, causes=causes, since=now)
        g.anchor_deadline = now + self.config.anchor_timeout if state == "Anchoring" else None
        g.park_deadline = now + self.config.park_timeout if state == "Anchored" else None
        g.history.append(event)
        return [event]
