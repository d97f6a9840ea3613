"""Parameter sweeps over one or two axes.

Grid points are evaluated independently (optionally in worker processes)
and the table is assembled in axis-major order regardless of completion
order. A failing point yields a row with its ``error`` column set.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Callable
from concurrent.futures import ProcessPoolExecutor, as_completed
from pathlib import Path
from typing import Any

from chua_lyapunov.analytic import analytic_report
from chua_lyapunov.attractors import classify
from chua_lyapunov.cli.config import RunConfig
from chua_lyapunov.cli.journal import SweepJournal, fingerprint
from chua_lyapunov.errors import DegenerateReduction
from chua_lyapunov.lyapunov import AttractorSample, dimension_ladder, liminf_proxy, sample_attractor
from chua_lyapunov.model import PARAMETER_NAMES, Parameters, equilibria

logger = logging.getLogger(__name__)

RESULT_COLUMNS: tuple[str, ...] = (
    "lambda1_0",
    "lambda2_0",
    "lambda3_0",
    "exact_dim",
    "bound_dim",
    "bound_source",
    "convergence_margin",
    "convergence_verdict",
    "entropy_bound",
    "equilibria",
    "dim_proxy",
    "classification",
    "error",
)

COLUMNS: tuple[str, ...] = ("index", *PARAMETER_NAMES, *RESULT_COLUMNS)


def grid_points(config: RunConfig) -> list[dict[str, float]]:
    """Parameter changes per grid point, first axis major."""
    axes = config.sweep.axes
    return [
        {axis.name: value for axis, value in zip(axes, combo)}
        for combo in itertools.product(*(axis.values() for axis in axes))
    ]


def sample_for(config: RunConfig, p: Parameters) -> AttractorSample:
    """The attractor sample K configured for ``p``."""
    s = config.sampling
    if s.points is not None:
        return AttractorSample.from_points(s.points, s.bounding_box)
    return sample_attractor(
        p,
        s.seed_points(),
        s.t_transient,
        s.t_sample,
        s.stride,
        config.integrator,
        s.bounding_box,
    )


def evaluate_point(
    config_data: dict[str, Any], index: int, change: dict[str, float]
) -> dict[str, Any]:
    """One sweep row. Runs in worker processes, so it takes plain data."""
    config = RunConfig.model_validate(config_data)
    row: dict[str, Any] = {name: None for name in COLUMNS}
    row["index"] = index
    try:
        p = config.parameters.replace(**change)
        row.update(p.model_dump())

        report = analytic_report(p, config.certificate)
        row["lambda1_0"], row["lambda2_0"], row["lambda3_0"] = report.lambda0
        row["exact_dim"] = report.exact_dim
        row["bound_dim"] = report.bound_dim
        row["bound_source"] = report.bound_source
        row["entropy_bound"] = report.entropy_bound
        if report.convergence is not None:
            row["convergence_margin"] = report.convergence.margin
            row["convergence_verdict"] = report.convergence.verdict.value
        try:
            eqs = equilibria(p)
            row["equilibria"] = len(eqs)
        except DegenerateReduction:
            eqs = []
            row["equilibria"] = "continuum"

        if config.sweep.numeric or config.sweep.classify:
            sample = sample_for(config, p)
            if config.sweep.numeric:
                rungs = dimension_ladder(p, sample, config.sampling.horizons, config.integrator)
                row["dim_proxy"] = liminf_proxy(rungs)
            if config.sweep.classify:
                verdict = classify(p, sample, eqs, config.classification, config.integrator)
                row["classification"] = verdict.label
    except Exception as e:
        logger.warning("Sweep point %d failed: %s", index, e)
        row["error"] = f"{type(e).__name__}: {e}"
    return {k: (float(v) if isinstance(v, float) else v) for k, v in row.items()}


def run_sweep(
    config: RunConfig,
    journal_path: Path,
    progress: Callable[[str], None] | None = None,
) -> list[dict[str, Any]]:
    """Evaluate every grid point, resuming from the journal when present.

    Returns:
        Rows in grid order; their count equals the grid cardinality.

    Raises:
        ConfigError: If the journal belongs to another configuration.
    """
    points = grid_points(config)
    journal = SweepJournal(journal_path, fingerprint(config), len(points))
    journal.set_progress_callback(progress)
    done = journal.load()
    journal.start()

    pending = [(i, change) for i, change in enumerate(points) if i not in done]
    data = config.resolved()
    logger.info(
        "Sweep: %d points, %d pending, %d jobs", len(points), len(pending), config.sweep.jobs
    )

    if config.sweep.jobs == 1 or len(pending) <= 1:
        for i, change in pending:
            row = evaluate_point(data, i, change)
            journal.record(i, row)
            done[i] = row
    else:
        with ProcessPoolExecutor(max_workers=config.sweep.jobs) as pool:
            futures = {pool.submit(evaluate_point, data, i, change): i for i, change in pending}
            for future in as_completed(futures):
                i = futures[future]
                row = future.result()
                journal.record(i, row)
                done[i] = row

    return [done[i] for i in range(len(points))]


def table(rows: list[dict[str, Any]]) -> tuple[list[str], list[list[Any]]]:
    """CSV header and cell rows."""
    header = list(COLUMNS)
    return header, [[row.get(name) for name in header] for row in rows]
