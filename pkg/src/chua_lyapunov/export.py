"""CSV and JSON writers for self-describing result files.

Every file carries the toolkit version and the resolved run configuration.
CSV values use 17 significant digits with '.' as decimal separator, so the
output does not depend on the locale and round-trips exactly.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import Any

import numpy as np
from numpy.typing import ArrayLike
from pydantic import BaseModel

from chua_lyapunov.__version__ import __version__

logger = logging.getLogger(__name__)

Cell = float | int | str | bool | None


def format_value(value: Cell) -> str:
    """Render one CSV cell."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v, ".17g")
    return str(value)


def config_json(config: dict[str, Any] | None) -> str:
    """Compact, key-sorted JSON of a resolved configuration."""
    return json.dumps(config or {}, sort_keys=True, separators=(",", ":"), default=str)


def csv_text(
    header: Sequence[str],
    rows: Iterable[Sequence[Cell]],
    config: dict[str, Any] | None = None,
) -> str:
    """CSV document with ``#`` comment lines for version and config."""
    buf = io.StringIO()
    buf.write(f"# toolkit_version={__version__}\n")
    buf.write(f"# config={config_json(config)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def read_csv_rows(text: str) -> tuple[list[str], list[list[str]]]:
    """Header and rows of a CSV document, skipping ``#`` comment lines."""
    body = [line for line in text.splitlines() if not line.startswith("#")]
    reader = csv.reader(body)
    rows = list(reader)
    if not rows:
        return [], []
    return rows[0], rows[1:]


def trajectory_rows(times: ArrayLike, states: ArrayLike) -> list[list[float]]:
    """``t,x,y,z`` rows from sampled times and states."""
    t = np.asarray(times, dtype=np.float64)
    s = np.asarray(states, dtype=np.float64)
    return [[float(t[k]), float(s[k, 0]), float(s[k, 1]), float(s[k, 2])] for k in range(len(t))]


def envelope(
    report: BaseModel | dict[str, Any] | list[Any], config: dict[str, Any] | None
) -> dict[str, Any]:
    """Wrap a report as ``{toolkit_version, config, report}``."""
    if isinstance(report, BaseModel):
        body: Any = report.model_dump(mode="json")
    elif isinstance(report, list):
        body = [r.model_dump(mode="json") if isinstance(r, BaseModel) else r for r in report]
    else:
        body = report
    return {"toolkit_version": __version__, "config": config or {}, "report": body}


def json_text(
    report: BaseModel | dict[str, Any] | list[Any], config: dict[str, Any] | None = None
) -> str:
    """Indented JSON document of the envelope."""
    return json.dumps(envelope(report, config), indent=2, default=str) + "\n"


def write_text(path: Path, content: str) -> Path:
    """Write ``content`` to ``path``, creating parent directories."""
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(content, encoding="utf-8")
    logger.info("Wrote %s", path)
    return path


def write_csv(
    path: Path,
    header: Sequence[str],
    rows: Iterable[Sequence[Cell]],
    config: dict[str, Any] | None = None,
) -> Path:
    return write_text(path, csv_text(header, rows, config))


def write_json(
    path: Path,
    report: BaseModel | dict[str, Any] | list[Any],
    config: dict[str, Any] | None = None,
) -> Path:
    return write_text(path, json_text(report, config))
