"""riverhelm command line: serve the gateway, validate maps, run scenarios."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .gateway.config import ConfigError, load_config
from .gateway.scenario import ScenarioError, run_scenario
from .mdl.errors import MdlParseError, MdlValidationError
from .mdl.parser import parse_mdl


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .gateway.service import build_app

    try:
        config = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    app = build_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    path = Path(args.map)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        print(f"{path}: {exc}", file=sys.stderr)
        return 2
    try:
        parsed = parse_mdl(text)
    except MdlParseError as exc:
        print(f"{path}:{exc.line}:{exc.col}: PARSE_ERROR: {exc.message}")
        return 1
    except MdlValidationError as exc:
        for d in exc.diagnostics:
            print(f"{path}:{d.render()}")
        return 1
    doc = parsed.document
    print(f"{path}: OK ({len(doc.landmarks)} landmarks, {len(doc.flows)} flows, "
          f"{len(doc.scale_regions)} scale regions, {len(parsed.annotations)} annotations)")
    return 0


def _cmd_scenario(args: argparse.Namespace) -> int:
    try:
        result = run_scenario(
            args.map,
            args.script,
            step_dt=args.step_dt,
            log_path=args.log,
            report_path=args.report,
        )
    except ScenarioError as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return 2
    for outcome in result.outcomes:
        status = "PASS" if outcome.ok else "FAIL"
        print(f"[{status}] t={outcome.t:g} {outcome.robot or '-'} {outcome.check}: {outcome.detail}")
    verdict = "passed" if result.report["passed"] else "FAILED"
    print(f"{args.script}: {len(result.outcomes)} assertion(s), {verdict}")
    if args.report:
        print(f"report written to {args.report}")
    return result.exit_code


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="riverhelm", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_serve = sub.add_parser("serve", help="run the HTTP gateway")
    p_serve.add_argument("--config", required=True, help="key=value config file")
    p_serve.set_defaults(fn=_cmd_serve)

    p_validate = sub.add_parser("validate", help="validate an MDL map file")
    p_validate.add_argument("map", help="path to a .mdl.xml file")
    p_validate.set_defaults(fn=_cmd_validate)

    p_scenario = sub.add_parser("scenario", help="run a scripted scenario headlessly")
    p_scenario.add_argument("map", help="path to a .mdl.xml file")
    p_scenario.add_argument("script", help="JSON-lines scenario script")
    p_scenario.add_argument("--step-dt", type=float, default=1.0, help="simulation step (s)")
    p_scenario.add_argument("--report", help="write the JSON report here")
    p_scenario.add_argument("--log", help="write the event log (JSON lines) here")
    p_scenario.set_defaults(fn=_cmd_scenario)

    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
