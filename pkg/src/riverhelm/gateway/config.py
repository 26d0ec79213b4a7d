"""Service configuration: plain-text key=value files.

Example:

    listen = 127.0.0.1:8080
    map = maps/river_demo.mdl.xml
    log = run/events.jsonl
    poll_interval = 15
    comm_timeout = 45
    anchor_timeout = 60
    park_timeout = 300
    step_dt = 1.0
    pace = 1.0
    simulation_controls = true
    robot.sub1 = A
    robot.sub2 = B

`robot.<id> = <landmark>` lines define the fleet. `pace` is wall seconds per
simulated second; 0 disables the built-in stepper (time is then driven via
the test-only step endpoint).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from ..guard.fsm import GuardConfig


class ConfigError(Exception):
    pass


@dataclass
class ApiConfig:
    host: str = "127.0.0.1"
    port: int = 8080
    map_path: Path = Path("map.mdl.xml")
    log_path: Path | None = None
    poll_interval: float | None = None
    guard: GuardConfig = field(default_factory=GuardConfig)
    robots: dict[str, str] = field(default_factory=dict)
    step_dt: float = 1.0
    pace: float = 1.0
    simulation_controls: bool = False

    def __post_init__(self):
        if not 1 <= self.port <= 65535:
            raise ConfigError(f"port out of range: {self.port}")
        if self.step_dt <= 0:
            raise ConfigError("step_dt must be positive")
        if self.pace < 0:
            raise ConfigError("pace must be >= 0")


def _parse_bool(raw: str, key: str) -> bool:
    low = raw.strip().lower()
    if low in ("true", "yes", "1", "on"):
        return True
    if low in ("false", "no", "0", "off"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {raw!r}")


def _parse_float(raw: str, key: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"{key}: expected a number, got {raw!r}") from None


def load_config(path: str | Path) -> ApiConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None

    values: dict[str, str] = {}
    robots: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, _, value = stripped.partition("=")
        key, value = key.strip(), value.strip()
        if key.startswith("robot."):
            robots[key[len("robot."):]] = value
        else:
            values[key] = value

    host, port = "127.0.0.1", 8080
    if "listen" in values:
        listen = values.pop("listen")
        if ":" not in listen:
            raise ConfigError(f"listen: expected host:port, got {listen!r}")
        host, _, port_s = listen.rpartition(":")
        try:
            port = int(port_s)
        except ValueError:
            raise ConfigError(f"listen: bad port {port_s!r}") from None

    base = path.parent

    def resolve(raw: str) -> Path:
        p = Path(raw)
        return p if p.is_absolute() else base / p

    if "map" not in values:
        raise ConfigError(f"{path}: missing required key 'map'")
    map_path = resolve(values.pop("map"))
    if not map_path.is_file():
        raise ConfigError(f"map file not found: {map_path}")

    log_path = resolve(values.pop("log")) if "log" in values else None

    guard = GuardConfig(
        comm_timeout=_parse_float(values.pop("comm_timeout", "45"), "comm_timeout"),
        anchor_timeout=_parse_float(values.pop("anchor_timeout", "60"), "anchor_timeout"),
        park_timeout=_parse_float(values.pop("park_timeout", "300"), "park_timeout"),
    )

    config = ApiConfig(
        host=host,
        port=port,
        map_path=map_path,
        log_path=log_path,
        poll_interval=_parse_float(values.pop("poll_interval"), "poll_interval") if "poll_interval" in values else None,
        guard=guard,
        robots=robots,
        step_dt=_parse_float(values.pop("step_dt", "1.0"), "step_dt"),
        pace=_parse_float(values.pop("pace", "1.0"), "pace"),
        simulation_controls=_parse_bool(values.pop("simulation_controls", "false"), "simulation_controls"),
    )
    if values:
        raise ConfigError(f"{path}: unknown keys: {', '.join(sorted(values))}")
    return config
