"""HTTP gateway: map, robot registry, operator events, exception feed,
and a push stream over one websocket.

Request handlers never touch the world directly: every operation is
funneled through a single-owner actor thread, so concurrent requests are
serialized and each handler only ever sees a consistent snapshot.
"""

from __future__ import annotations

import asyncio
import concurrent.futures
import queue
import threading
from typing import Callable

from fastapi import FastAPI, HTTPException, Request, WebSocket, WebSocketDisconnect
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, Response

from ..agents.events import (
    InvalidEventSequence,
    OffMap,
    RobotFaulted,
    UnknownRobot,
)
from ..guard.fsm import NotAcknowledgeable
from ..guard.fsm import UnknownRobot as GuardUnknownRobot
from ..mdl import parse_mdl, serialize_mdl
from ..mdl.errors import MdlError
from ..sim.world import UnknownRobot as SimUnknownRobot
from .config import ApiConfig
from .eventlog import EventLog, LogRecord
from .runtime import BadEvent, GatewayRuntime
from .schemas import (
    AcknowledgeIn,
    AcknowledgeOut,
    ExceptionEventOut,
    FailureInjectionIn,
    InterpreterResponseOut,
    LogRecordOut,
    RobotSnapshotOut,
    StepIn,
    UIEventIn,
)

STREAM_KINDS = ("gps_fix", "exception_event", "robot_snapshot")


class SessionActor:
    """Owns the runtime; all access goes through `submit`."""

    def __init__(self, runtime: GatewayRuntime):
        self.runtime = runtime
        self._inbox: queue.Queue = queue.Queue()
        self._thread = threading.Thread(target=self._run, name="session-actor", daemon=True)
        self._thread.start()

    def _run(self) -> None:
        while True:
            item = self._inbox.get()
            if item is None:
                return
            fn, future = item
            if not future.set_running_or_notify_cancel():
                continue
            try:
                future.set_result(fn(self.runtime))
            except BaseException as exc:  # delivered to the caller
                future.set_exception(exc)

    def submit(self, fn: Callable[[GatewayRuntime], object]):
        future: concurrent.futures.Future = concurrent.futures.Future()
        self._inbox.put((fn, future))
        return future.result()

    def stop(self) -> None:
        self._inbox.put(None)
        self._thread.join(timeout=5)


class Stepper:
    """Paces the simulation against the wall clock (pace seconds per step)."""

    def __init__(self, actor: SessionActor, step_dt: float, pace: float):
        self._actor = actor
        self._step_dt = step_dt
        self._pace = pace
        self._stop = threading.Event()
        self._thread = threading.Thread(target=self._run, name="sim-stepper", daemon=True)

    def start(self) -> None:
        if self._pace > 0:
            self._thread.start()

    def _run(self) -> None:
        while not self._stop.wait(self._pace * self._step_dt):
            self._actor.submit(lambda rt: rt.advance(self._step_dt))

    def stop(self) -> None:
        self._stop.set()
        if self._thread.is_alive():
            self._thread.join(timeout=5)


def _http_error(status: int, detail: str) -> HTTPException:
    return HTTPException(status_code=status, detail=detail)


def build_app(config: ApiConfig) -> FastAPI:
    try:
        doc = parse_mdl(config.map_path.read_text(encoding="utf-8")).document
    except OSError as exc:
        raise RuntimeError(f"cannot read map {config.map_path}: {exc}") from None
    except MdlError as exc:
        raise RuntimeError(f"invalid map {config.map_path}: {exc}") from None

    from ..agents.session import SessionConfig

    session_config = SessionConfig(poll_interval=config.poll_interval or 15.0)
    runtime = GatewayRuntime(
        doc,
        guard_config=config.guard,
        session_config=session_config,
        log=EventLog(config.log_path),
    )
    for robot_id in sorted(config.robots):
        runtime.apply_ui_event({"type": "deploy", "robot_id": robot_id, "at": config.robots[robot_id]})

    actor = SessionActor(runtime)
    stepper = Stepper(actor, config.step_dt, config.pace)

    from contextlib import asynccontextmanager

    @asynccontextmanager
    async def lifespan(_app: FastAPI):
        stepper.start()
        yield
        stepper.stop()
        actor.stop()
        runtime.log.close()

    app = FastAPI(title="riverhelm gateway", version="0.1.0", lifespan=lifespan)
    app.state.actor = actor
    app.state.config = config

    @app.exception_handler(RequestValidationError)
    async def _bad_request(_request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": exc.errors()})

    # ------------------------------------------------------------------ map

    @app.get("/api/map")
    def get_map() -> Response:
        xml = actor.submit(lambda rt: serialize_mdl(*rt.session.annotated_map()))
        return Response(content=xml, media_type="application/xml")

    # --------------------------------------------------------------- robots

    @app.get("/api/robots", response_model=list[RobotSnapshotOut])
    def get_robots():
        return actor.submit(lambda rt: rt.session.robot_snapshots())

    @app.get("/api/robots/{robot_id}", response_model=RobotSnapshotOut)
    def get_robot(robot_id: str):
        try:
            return actor.submit(lambda rt: rt.session.robot_snapshot(robot_id))
        except UnknownRobot as exc:
            raise _http_error(404, str(exc)) from None

    @app.post("/api/robots/{robot_id}/events", response_model=InterpreterResponseOut,
              response_model_exclude_none=True)
    def post_event(robot_id: str, event: UIEventIn):
        payload: dict = {"type": event.type, "robot_id": robot_id}
        if event.target is not None:
            payload["target"] = {"lat": event.target.lat, "lon": event.target.lon, "depth": event.target.depth}
        if event.item is not None:
            payload["item"] = event.item
        try:
            return actor.submit(lambda rt: rt.apply_ui_event(payload))
        except UnknownRobot as exc:
            raise _http_error(404, str(exc)) from None
        except (RobotFaulted, InvalidEventSequence, OffMap) as exc:
            raise _http_error(409, str(exc)) from None
        except (BadEvent, ValueError) as exc:
            raise _http_error(400, str(exc)) from None

    @app.get("/api/robots/{robot_id}/exceptions", response_model=list[ExceptionEventOut])
    def get_exceptions(robot_id: str):
        try:
            return actor.submit(
                lambda rt: [e.as_dict() for e in rt.session.exception_history(robot_id)]
            )
        except UnknownRobot as exc:
            raise _http_error(404, str(exc)) from None

    @app.post("/api/robots/{robot_id}/acknowledge", response_model=AcknowledgeOut)
    def post_acknowledge(robot_id: str, body: AcknowledgeIn | None = None):
        operator = body.operator_id if body is not None else "operator"
        payload = {"type": "acknowledge", "robot_id": robot_id, "operator_id": operator}
        try:
            return actor.submit(lambda rt: rt.apply_ui_event(payload))
        except (UnknownRobot, GuardUnknownRobot) as exc:
            raise _http_error(404, str(exc)) from None
        except NotAcknowledgeable as exc:
            raise _http_error(409, str(exc)) from None

    # ------------------------------------------------------- test-only hooks

    def _require_sim_controls() -> None:
        if not config.simulation_controls:
            raise _http_error(403, "simulation controls are disabled")

    @app.post("/api/sim/failures/{robot_id}")
    def post_failure(robot_id: str, body: FailureInjectionIn):
        _require_sim_controls()
        payload = {"type": "inject_failure", "robot_id": robot_id, "flag": body.flag, "value": body.value}
        try:
            actor.submit(lambda rt: rt.apply_ui_event(payload))
        except (UnknownRobot, SimUnknownRobot) as exc:
            raise _http_error(404, str(exc)) from None
        return {"response": "failure_injected", "robot_id": robot_id, "flag": body.flag, "value": body.value}

    @app.post("/api/sim/step")
    def post_step(body: StepIn):
        _require_sim_controls()

        def run(rt: GatewayRuntime):
            for _ in range(body.steps):
                rt.advance(body.dt)
            return rt.session.t

        return {"t": actor.submit(run)}

    # ------------------------------------------------------------ log/stream

    @app.get("/api/log", response_model=list[LogRecordOut])
    def get_log(from_seq: int = 0, kinds: str | None = None):
        wanted = set(kinds.split(",")) if kinds else None
        records = actor.submit(lambda rt: rt.log.records())
        return [
            r.as_dict() for r in records
            if r.seq > from_seq and (wanted is None or r.kind in wanted)
        ]

    @app.websocket("/api/stream")
    async def stream(ws: WebSocket, from_seq: int = 0):
        await ws.accept()
        frames: queue.Queue = queue.Queue()

        def deliver(record: LogRecord) -> None:
            if record.kind in STREAM_KINDS:
                frames.put(record)

        backlog, cancel = actor.runtime.log.subscribe_with_backlog(deliver, from_seq)

        disconnected = asyncio.Event()

        async def watch() -> None:
            try:
                while True:
                    message = await ws.receive()
                    if message["type"] == "websocket.disconnect":
                        break
            except Exception:
                pass
            disconnected.set()

        watcher = asyncio.ensure_future(watch())
        loop = asyncio.get_event_loop()
        try:
            for record in backlog:
                if record.kind in STREAM_KINDS:
                    await ws.send_json(record.as_dict())
            while not disconnected.is_set():
                try:
                    record = await loop.run_in_executor(None, frames.get, True, 0.1)
                except queue.Empty:
                    continue
                await ws.send_json(record.as_dict())
        except (WebSocketDisconnect, RuntimeError):
            pass
        finally:
            cancel()
            watcher.cancel()

    @app.get("/api/health")
    def health():
        return {"t": actor.submit(lambda rt: rt.session.t), "robots": actor.submit(lambda rt: rt.session.robot_ids())}

    return app
