"""External surface: HTTP service, config, event log, scenario runner."""

from .config import ApiConfig, ConfigError, load_config
from .eventlog import EventLog, INPUT_KINDS, LogRecord, RECORD_KINDS, load_records
from .runtime import BadEvent, GatewayRuntime, replay_records, response_to_json, ui_event_from_json
from .scenario import ScenarioError, ScenarioResult, run_scenario
from .service import build_app

__all__ = [
    "ApiConfig",
    "BadEvent",
    "ConfigError",
    "EventLog",
    "GatewayRuntime",
    "INPUT_KINDS",
    "LogRecord",
    "RECORD_KINDS",
    "ScenarioError",
    "ScenarioResult",
    "build_app",
    "load_config",
    "load_records",
    "replay_records",
    "response_to_json",
    "run_scenario",
    "ui_event_from_json",
]
