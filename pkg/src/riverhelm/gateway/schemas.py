"""Pydantic request/response models for the HTTP API."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field


class TargetIn(BaseModel):
    lat: float = Field(ge=-90, le=90)
    lon: float = Field(ge=-180, le=180)
    depth: float = Field(default=0.0, ge=0)


class UIEventIn(BaseModel):
    type: Literal["click_on_robot", "drag_robot", "place_robot", "menu_select"]
    target: TargetIn | None = None
    item: Literal["park", "compute_optimal_flow", "anchor", "release"] | None = None


class InterpreterResponseOut(BaseModel):
    response: Literal["context_menu", "drag_started", "dispatched", "rejected"]
    items: list[str] | None = None
    scale_denominator: int | None = None
    robot_id: str | None = None
    commands: list[dict] | None = None
    reason: str | None = None


class PositionOut(BaseModel):
    lat: float
    lon: float
    depth: float


class RobotSnapshotOut(BaseModel):
    id: str
    position: PositionOut
    velocity: list[float]
    anchored: bool
    parked_at: str | None
    fuel: float
    failures: dict[str, bool]
    last_fix_time: float | None
    guard_state: str
    causes: list[str]
    acknowledgeable: bool


class ExceptionEventOut(BaseModel):
    robot_id: str
    from_state: str
    to_state: str
    causes: list[str]
    timestamp: float


class AcknowledgeIn(BaseModel):
    operator_id: str = "operator"


class AcknowledgeOut(BaseModel):
    response: Literal["acknowledged"]
    event: ExceptionEventOut


class FailureInjectionIn(BaseModel):
    flag: Literal["communication", "gps", "sensor_power", "propulsion"]
    value: bool = True


class StepIn(BaseModel):
    dt: float = Field(default=1.0, gt=0)
    steps: int = Field(default=1, ge=1, le=100_000)


class LogRecordOut(BaseModel):
    seq: int
    timestamp: float
    kind: str
    payload: dict


class ErrorOut(BaseModel):
    detail: str
