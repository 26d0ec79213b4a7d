"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Everything here runs headless: the simulated clock via run_scenario /
FleetSession, and the HTTP API via the in-process test client. No frontend
is involved (that is itself the final criterion).
"""

import itertools
import json
import random
import time
from pathlib import Path

from fastapi.testclient import TestClient

from riverhelm.agents import (
    DragRobot,
    FleetSession,
    MenuSelect,
    PlaceRobot,
    Rejected,
    RobotFaulted,
    SessionConfig,
    InvalidEventSequence,
    OffMap,
)
from riverhelm.gateway import load_records, replay_records, run_scenario
from riverhelm.gateway.config import ApiConfig
from riverhelm.gateway.service import build_app
from riverhelm.guard import ExceptionGuard, GuardConfig
from riverhelm.mdl import (
    MdlParseError,
    MdlValidationError,
    parse_mdl,
    serialize_mdl,
)
from riverhelm.sim import command_from_json

from support import on_flow_graph, random_flow_graph, river_map
from test_guard import FLAGS, FLAG_OBS, all_cases, oracle_mechanical
from test_mdl_routing import oracle_all_simple_path_costs, oracle_path_cost

ROOT = Path(__file__).resolve().parent.parent
MAP = ROOT / "maps" / "river_demo.mdl.xml"
CORPUS = ROOT / "corpus"


def report(name: str, ok: bool, detail: str = "") -> None:
    line = f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f"  ({detail})"
    print(line)
    assert ok, line


def test_acceptance_polling_rate(tmp_path):
    script = tmp_path / "poll.jsonl"
    lines = [
        {"t": 0, "action": "deploy", "robot": "sub1", "at": "A"},
        {"t": 150, "action": "assert", "robot": "sub1", "check": "fix_times",
         "equals": [15, 30, 45, 60, 75, 90, 105, 120, 135, 150]},
        {"t": 150, "action": "assert", "robot": "sub1", "check": "fix_count", "equals": 10},
    ]
    script.write_text("\n".join(json.dumps(l) for l in lines) + "\n")
    started = time.monotonic()
    result = run_scenario(MAP, script)
    elapsed = time.monotonic() - started
    ok = result.exit_code == 0 and elapsed < 1.0
    report("polling-rate-15s", ok, f"10 polls over 150 s simulated, {elapsed:.3f} s wall")


def test_acceptance_validator_corpus():
    failures = []
    underpopulated = 0
    valid_files = sorted((CORPUS / "valid").glob("*.mdl.xml"))
    invalid_files = sorted((CORPUS / "invalid").glob("*.mdl.xml"))
    assert valid_files and invalid_files

    for path in valid_files:
        try:
            parsed = parse_mdl(path.read_text())
        except Exception as exc:  # noqa: BLE001 - report below
            failures.append(f"{path.name}: rejected ({exc})")
            continue
        first = serialize_mdl(parsed.document, parsed.annotations)
        second_parse = parse_mdl(first)
        second = serialize_mdl(second_parse.document, second_parse.annotations)
        if first != second:
            failures.append(f"{path.name}: round trip not byte-identical")

    for path in invalid_files:
        expected = path.with_suffix("").with_suffix(".expected").read_text().strip()
        if expected == "FLOW_UNDERPOPULATED":
            underpopulated += 1
        try:
            parse_mdl(path.read_text())
            failures.append(f"{path.name}: accepted, expected {expected}")
        except MdlParseError:
            if expected != "PARSE_ERROR":
                failures.append(f"{path.name}: PARSE_ERROR, expected {expected}")
        except MdlValidationError as exc:
            if exc.rule_id != expected:
                failures.append(f"{path.name}: {exc.rule_id}, expected {expected}")

    if underpopulated < 3:
        failures.append(f"only {underpopulated} FLOW_UNDERPOPULATED cases in the corpus")
    report(
        "mdl-validator-corpus",
        not failures,
        f"{len(valid_files)} valid + {len(invalid_files)} invalid files"
        + ("; " + "; ".join(failures) if failures else ""),
    )


def test_acceptance_exception_truth_table():
    mismatches = []
    cases = 0
    for flags, outcome, park_timeout in all_cases():
        cases += 1
        guard = ExceptionGuard(GuardConfig())
        guard.register("r1")
        now = 0.0
        for f in FLAGS:
            if f in flags:
                guard.observe("r1", FLAG_OBS[f], now)
        guard.observe("r1", outcome, now)
        if park_timeout:
            now = guard.config.park_timeout + 1.0
            guard.tick(now)
        got = guard.status("r1").state
        want = oracle_mechanical(flags, outcome, park_timeout)
        if got != want:
            mismatches.append((sorted(flags), outcome, park_timeout, got, want))
    report(
        "exception-truth-table",
        cases >= 32 and not mismatches,
        f"{cases} cases, {len(mismatches)} mismatches",
    )


def test_acceptance_safety_invariant_fuzz():
    violations = []
    scripts = 0
    for seed in range(1000):
        scripts += 1
        rng = random.Random(987_000 + seed)
        doc = river_map(flow_east=rng.choice([0.0, 0.4, 1.0]))
        events = []
        session = FleetSession(
            doc,
            guard_config=GuardConfig(anchor_timeout=10.0, park_timeout=15.0),
            session_config=SessionConfig(poll_interval=5.0, snap_radius_m=50.0),
            sink=lambda k, p, _bucket=events: _bucket.append((k, p)),
        )
        session.add_robot("r1", "A", anchor_operational=rng.random() > 0.2)
        session.add_robot("r2", "B")
        for _ in range(rng.randint(5, 25)):
            rid = rng.choice(["r1", "r2"])
            action = rng.randrange(8)
            try:
                if action == 0:
                    session.inject_failure(rid, rng.choice(FLAGS), rng.random() < 0.7)
                elif action == 1:
                    session.handle_event(MenuSelect(rid, rng.choice(
                        ["park", "anchor", "release", "compute_optimal_flow"])))
                elif action == 2:
                    session.handle_event(DragRobot(rid, doc.landmark(rng.choice("ABCFP")).position))
                    session.handle_event(PlaceRobot(rid))
                elif action == 3:
                    try:
                        session.acknowledge(rid, "fuzz")
                    except Exception:
                        pass
                else:
                    pass
            except (RobotFaulted, InvalidEventSequence, OffMap):
                pass
            held = {
                r: (session.world.robot(r).anchored, session.world.robot(r).parked_at,
                    session.world.robot(r).position)
                for r in ("r1", "r2")
            }
            session.advance(float(rng.choice([1, 1, 2, 5])))
            for r, (anchored, parked, position) in held.items():
                if (anchored or parked) and session.world.robot(r).position != position:
                    violations.append((seed, r, "moved while anchored/parked"))
        for kind, payload in events:
            if kind != "exception_event":
                continue
            if payload["to_state"] == "AutoParking" and payload["from_state"] != "AutoParking":
                bad = {"communication", "propulsion"} & set(payload["causes"])
                if bad:
                    violations.append((seed, payload["robot_id"], f"AutoParking with {sorted(bad)}"))
    report(
        "safety-invariant-fuzz",
        scripts >= 1000 and not violations,
        f"{scripts} scripts, {len(violations)} violations",
    )


def test_acceptance_end_to_end_placement(tmp_path):
    log_path = tmp_path / "placement.log.jsonl"
    script = tmp_path / "place.jsonl"
    lines = [
        {"t": 0, "action": "deploy", "robot": "sub1", "at": "A"},
        {"t": 1, "action": "command", "robot": "sub1",
         "event": {"type": "drag_robot", "target": {"lat": 45.0018, "lon": 12.0}}},
        {"t": 1, "action": "command", "robot": "sub1", "event": {"type": "place_robot"}},
        {"t": 140, "action": "assert", "robot": "sub1", "check": "position_within",
         "landmark": "C", "meters": 5},
    ]
    script.write_text("\n".join(json.dumps(l) for l in lines) + "\n")
    started = time.monotonic()
    result = run_scenario(MAP, script, log_path=log_path)
    elapsed = time.monotonic() - started

    doc = parse_mdl(MAP.read_text()).document
    commands = [
        command_from_json(r.payload)
        for r in load_records(log_path)
        if r.kind == "command" and r.payload["robot_id"] == "sub1"
        and r.payload["cmd"] == "move_to" and r.payload["ok"]
    ]
    graph_ok = bool(commands) and on_flow_graph(doc, commands, "A")
    ok = result.exit_code == 0 and graph_ok and elapsed < 5.0
    report(
        "end-to-end-placement",
        ok,
        f"converged={result.exit_code == 0}, edges-on-graph={graph_ok}, {elapsed:.3f} s wall",
    )


def test_acceptance_routing_oracle():
    from riverhelm.mdl import NoRoute, route_to

    rng = random.Random(20260301)
    graphs = 0
    mismatches = 0
    checked = 0
    while graphs < 50:
        doc = random_flow_graph(rng)
        graphs += 1
        ids = [l.id for l in doc.landmarks]
        for _ in range(3):
            src, dst = rng.sample(ids, 2)
            costs = oracle_all_simple_path_costs(doc, src, dst)
            if not costs:
                try:
                    route_to(doc, src, dst)
                    mismatches += 1
                except NoRoute:
                    pass
                continue
            path = route_to(doc, src, dst)
            checked += 1
            if oracle_path_cost(doc, path) != min(costs):
                mismatches += 1
    report(
        "routing-oracle",
        graphs >= 50 and mismatches == 0 and checked > 50,
        f"{graphs} graphs, {checked} routed pairs, {mismatches} mismatches",
    )


def test_acceptance_replay_determinism(tmp_path):
    script = tmp_path / "mixed.jsonl"
    lines = [
        {"t": 0, "action": "deploy", "robot": "r1", "at": "A"},
        {"t": 0, "action": "deploy", "robot": "r2", "at": "B"},
        {"t": 1, "action": "command", "robot": "r1",
         "event": {"type": "drag_robot", "target": {"lat": 45.0018, "lon": 12.0}}},
        {"t": 1, "action": "command", "robot": "r1", "event": {"type": "place_robot"}},
        {"t": 10, "action": "inject_failure", "robot": "r2", "flag": "communication", "value": True},
        {"t": 90, "action": "inject_failure", "robot": "r2", "flag": "communication", "value": False},
        {"t": 140, "action": "command", "robot": "r1", "event": {"type": "menu_select", "item": "park"}},
        {"t": 210, "action": "acknowledge", "robot": "r2"},  # auto-parked by now
        {"t": 260, "action": "run_until"},
    ]
    script.write_text("\n".join(json.dumps(l) for l in lines) + "\n")
    log_path = tmp_path / "mixed.log.jsonl"
    result = run_scenario(MAP, script, log_path=log_path)
    original = result.runtime.session.registry_snapshot()

    doc = parse_mdl(MAP.read_text()).document
    replayed = replay_records(doc, load_records(log_path))
    ok = replayed.session.registry_snapshot() == original
    report("replay-determinism", ok, "final registry snapshot bit-for-bit" if ok else "snapshots differ")


def test_acceptance_headless_http_api(tmp_path):
    # the whole surface exercised without any frontend: the API serves map,
    # robots, events, exceptions and the push stream in-process
    config = ApiConfig(
        map_path=MAP,
        log_path=tmp_path / "api.jsonl",
        robots={"sub1": "A"},
        pace=0.0,
        simulation_controls=True,
    )
    with TestClient(build_app(config)) as client:
        client.post("/api/sim/step", json={"dt": 1.0, "steps": 16})
        checks = {
            "map": client.get("/api/map").status_code == 200,
            "robots": client.get("/api/robots").status_code == 200,
            "event": client.post("/api/robots/sub1/events",
                                 json={"type": "click_on_robot"}).status_code == 200,
            "exceptions": client.get("/api/robots/sub1/exceptions").status_code == 200,
        }
        with client.websocket_connect("/api/stream") as ws:
            frame = ws.receive_json()
            checks["stream"] = frame["kind"] in ("gps_fix", "robot_snapshot", "exception_event")
    ok = all(checks.values())
    report("headless-no-frontend", ok, ", ".join(f"{k}={v}" for k, v in checks.items()))
