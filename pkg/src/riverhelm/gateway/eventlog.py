"""Append-only event log with fan-out to live subscribers.

Every frame pushed to stream subscribers is first persisted, so a subscriber
connected from the start observes exactly the on-disk sequence. Timestamps
are simulation seconds, which keeps logs byte-reproducible across runs.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

RECORD_KINDS = (
    "ui_event",
    "command",
    "gps_fix",
    "exception_event",
    "robot_snapshot",
    "tick",
)

# Inputs are what replay re-applies; everything else must regenerate.
INPUT_KINDS = ("ui_event", "tick")


@dataclass(frozen=True)
class LogRecord:
    seq: int
    timestamp: float
    kind: str
    payload: dict

    def as_dict(self) -> dict:
        return {"seq": self.seq, "timestamp": self.timestamp, "kind": self.kind, "payload": self.payload}

    def to_line(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, separators=(",", ":"))


class EventLog:
    """Strictly-ordered append-only record sink, optionally file-backed."""

    def __init__(self, path: str | Path | None = None):
        self._path = Path(path) if path is not None else None
        self._records: list[LogRecord] = []
        self._subscribers: list[Callable[[LogRecord], None]] = []
        self._lock = threading.Lock()
        self._file = None
        if self._path is not None:
            self._path.parent.mkdir(parents=True, exist_ok=True)
            self._file = self._path.open("a", encoding="utf-8")

    def append(self, kind: str, payload: dict, timestamp: float) -> LogRecord:
        if kind not in RECORD_KINDS:
            raise ValueError(f"unknown record kind: {kind!r}")
        with self._lock:
            record = LogRecord(seq=len(self._records) + 1, timestamp=timestamp, kind=kind, payload=payload)
            self._records.append(record)
            if self._file is not None:
                self._file.write(record.to_line() + "\n")
                self._file.flush()
            subscribers = list(self._subscribers)
        for deliver in subscribers:
            deliver(record)
        return record

    def subscribe(self, deliver: Callable[[LogRecord], None]) -> Callable[[], None]:
        """Register a push callback; returns the unsubscribe function."""
        with self._lock:
            self._subscribers.append(deliver)

        def cancel() -> None:
            with self._lock:
                if deliver in self._subscribers:
                    self._subscribers.remove(deliver)

        return cancel

    def subscribe_with_backlog(
        self, deliver: Callable[[LogRecord], None], from_seq: int = 0
    ) -> tuple[list[LogRecord], Callable[[], None]]:
        """Atomically snapshot the backlog after `from_seq` and register for
        what follows: every record is seen exactly once."""
        with self._lock:
            backlog = [r for r in self._records if r.seq > from_seq]
            self._subscribers.append(deliver)

        def cancel() -> None:
            with self._lock:
                if deliver in self._subscribers:
                    self._subscribers.remove(deliver)

        return backlog, cancel

    def records(self) -> list[LogRecord]:
        with self._lock:
            return list(self._records)

    def close(self) -> None:
        with self._lock:
            if self._file is not None:
                self._file.close()
                self._file = None


def load_records(path: str | Path) -> list[LogRecord]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            data = json.loads(line)
            records.append(LogRecord(
                seq=data["seq"], timestamp=data["timestamp"], kind=data["kind"], payload=data["payload"],
            ))
    return records
