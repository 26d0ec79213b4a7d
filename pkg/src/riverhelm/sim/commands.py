"""The robotic command language: the bottom layer of the communication model.

A deliberately minimal command set; the interpreter and the fault supervisor
only ever actuate robots through these values.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..mdl.model import GeoCoordinate


@dataclass(frozen=True)
class GetCoordinates:
    pass


@dataclass(frozen=True)
class MoveTo:
    target: GeoCoordinate
    speed: float


@dataclass(frozen=True)
class Anchor:
    pass


@dataclass(frozen=True)
class ReleaseAnchor:
    pass


@dataclass(frozen=True)
class Park:
    terminal: str


@dataclass(frozen=True)
class Halt:
    pass


RoboticCommand = GetCoordinates | MoveTo | Anchor | ReleaseAnchor | Park | Halt


def command_to_json(cmd: RoboticCommand) -> dict:
    if isinstance(cmd, GetCoordinates):
        return {"cmd": "get_coordinates"}
    if isinstance(cmd, MoveTo):
        return {
            "cmd": "move_to",
            "target": {"lat": cmd.target.lat, "lon": cmd.target.lon, "depth": cmd.target.depth},
            "speed": cmd.speed,
        }
    if isinstance(cmd, Anchor):
        return {"cmd": "anchor"}
    if isinstance(cmd, ReleaseAnchor):
        return {"cmd": "release_anchor"}
    if isinstance(cmd, Park):
        return {"cmd": "park", "terminal": cmd.terminal}
    if isinstance(cmd, Halt):
        return {"cmd": "halt"}
    raise TypeError(f"not a robotic command: {cmd!r}")


def command_from_json(data: dict) -> RoboticCommand:
    kind = data["cmd"]
    if kind == "get_coordinates":
        return GetCoordinates()
    if kind == "move_to":
        t = data["target"]
        return MoveTo(GeoCoordinate(t["lat"], t["lon"], t.get("depth", 0.0)), data["speed"])
    if kind == "anchor":
        return Anchor()
    if kind == "release_anchor":
        return ReleaseAnchor()
    if kind == "park":
        return Park(data["terminal"])
    if kind == "halt":
        return Halt()
    raise ValueError(f"unknown command kind: {kind!r}")
