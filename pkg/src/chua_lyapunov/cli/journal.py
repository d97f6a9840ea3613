"""Append-only progress journal for resumable sweeps.

The journal is a JSON-lines file. The first line records the fingerprint of
the resolved sweep configuration; each later line holds one finished grid
point. A run resumes only from a journal with the same fingerprint.
"""

from __future__ import annotations

import hashlib
import json
import logging
from collections.abc import Callable
from pathlib import Path
from typing import Any

from pydantic import BaseModel, Field, ValidationError

from chua_lyapunov.cli.config import ConfigError, RunConfig
from chua_lyapunov.export import config_json

logger = logging.getLogger(__name__)


class JournalHeader(BaseModel):
    """First journal line."""

    kind: str = Field(default="header", description="Record kind")
    fingerprint: str = Field(..., description="SHA-256 of the sweep configuration")
    points: int = Field(..., ge=1, description="Grid cardinality")


class JournalEntry(BaseModel):
    """One finished grid point."""

    kind: str = Field(default="point", description="Record kind")
    index: int = Field(..., ge=0, description="Grid index, axis-major")
    row: dict[str, Any] = Field(..., description="CSV row values by column")


def fingerprint(config: RunConfig) -> str:
    """Hash of everything that affects sweep rows.

    Output location, output format and worker count do not change the rows
    and are left out.
    """
    payload = config.resolved()
    payload.pop("output", None)
    payload.get("sweep", {}).pop("jobs", None)
    payload.get("sweep", {}).pop("journal", None)
    return hashlib.sha256(config_json(payload).encode("utf-8")).hexdigest()


class SweepJournal:
    """Single-writer progress journal.

    Attributes:
        path: Journal file.
        fingerprint: Fingerprint of the current sweep configuration.
        points: Grid cardinality.
    """

    def __init__(self, path: Path, fingerprint: str, points: int) -> None:
        self.path = path
        self.fingerprint = fingerprint
        self.points = points
        self._on_progress: Callable[[str], None] | None = None

    def set_progress_callback(self, callback: Callable[[str], None] | None) -> None:
        """Set a callback for progress updates."""
        self._on_progress = callback

    def _log(self, message: str) -> None:
        logger.info(message)
        if self._on_progress:
            self._on_progress(message)

    def load(self) -> dict[int, dict[str, Any]]:
        """Rows already recorded, keyed by grid index.

        Unreadable lines (a write cut short by an interruption) are skipped
        with a warning.

        Raises:
            ConfigError: If the journal belongs to a different configuration.
        """
        if not self.path.exists():
            return {}
        lines = self.path.read_text(encoding="utf-8").splitlines()
        if not lines:
            return {}
        try:
            header = JournalHeader.model_validate(json.loads(lines[0]))
        except (json.JSONDecodeError, ValidationError) as e:
            raise ConfigError(f"journal {self.path} has no readable header: {e}") from e
        if header.fingerprint != self.fingerprint:
            raise ConfigError(
                f"journal {self.path} was written for a different configuration; "
                "remove it or change the output directory"
            )

        done: dict[int, dict[str, Any]] = {}
        for number, line in enumerate(lines[1:], start=2):
            if not line.strip():
                continue
            try:
                entry = JournalEntry.model_validate(json.loads(line))
            except (json.JSONDecodeError, ValidationError) as e:
                logger.warning("Skipping unreadable journal line %d: %s", number, e)
                continue
            done[entry.index] = entry.row
        self._log(f"Resuming sweep: {len(done)} of {self.points} points already done")
        return done

    def start(self) -> None:
        """Create the journal with its header unless it already exists."""
        if self.path.exists() and self.path.stat().st_size > 0:
            self._repair_tail()
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        header = JournalHeader(fingerprint=self.fingerprint, points=self.points)
        self.path.write_text(header.model_dump_json() + "\n", encoding="utf-8")

    def _repair_tail(self) -> None:
        # A cut-short final line has no newline; terminate it so appends stay line-aligned.
        with open(self.path, "rb") as f:
            f.seek(-1, 2)
            last = f.read(1)
        if last != b"\n":
            with open(self.path, "a", encoding="utf-8") as f:
                f.write("\n")

    def record(self, index: int, row: dict[str, Any]) -> None:
        """Append one finished point."""
        entry = JournalEntry(index=index, row=row)
        with open(self.path, "a", encoding="utf-8") as f:
            f.write(entry.model_dump_json() + "\n")
            f.flush()
        self._log(f"Point {index + 1}/{self.points} done")
