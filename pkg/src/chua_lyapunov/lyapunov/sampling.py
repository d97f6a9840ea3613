"""Trajectory sampling of an attractor as a finite proxy for K."""

from __future__ import annotations

import logging
import math

import numpy as np
from numpy.typing import ArrayLike

from chua_lyapunov.errors import EmptySample
from chua_lyapunov.lyapunov.models import AttractorSample, SampleSource, SeedFailure
from chua_lyapunov.model import Parameters, SmoothSystem, as_state
from chua_lyapunov.variational import IntegratorConfig, integrate_batch

logger = logging.getLogger(__name__)


def sample_count(t_sample: float, stride: float) -> int:
    """Number of points each seed contributes over the sampling window."""
    return max(1, int(math.floor(t_sample / stride + 1e-9)))


def sample_attractor(
    model: Parameters | SmoothSystem,
    seeds: ArrayLike,
    t_transient: float,
    t_sample: float,
    stride: float,
    cfg: IntegratorConfig,
    bounding_box: float | None = None,
) -> AttractorSample:
    """Sample the attractor reached from ``seeds``.

    Each seed is integrated over ``[0, t_transient]`` (discarded) and then
    sampled every ``stride`` over ``(t_transient, t_transient + t_sample]``.
    Seeds that blow up, or leave the bounding box, are recorded as failures
    and contribute no points.

    Args:
        model: Parameters of the Chua model or any ``SmoothSystem``.
        seeds: Initial points, shape (n, 3).
        t_transient: Transient time to discard.
        t_sample: Length of the sampling window.
        stride: Time between samples.
        cfg: Integrator settings.
        bounding_box: Optional half-width of the admissible box.

    Returns:
        The sample, points ordered seed by seed.

    Raises:
        ValueError: If a time argument is not positive.
        EmptySample: If no seed produced samples.
    """
    if not (t_transient > 0.0 and t_sample > 0.0 and stride > 0.0):
        raise ValueError("t_transient, t_sample and stride must be positive")
    starts = np.atleast_2d(as_state(seeds))
    n_samples = sample_count(t_sample, stride)
    times = np.concatenate(
        [[0.0, t_transient], t_transient + stride * np.arange(1, n_samples + 1)]
    )
    states, blow_times = integrate_batch(model, starts, times, cfg)
    window = states[:, 2:, :]

    failures: list[SeedFailure] = []
    points: list[tuple[float, float, float]] = []
    for i, seed in enumerate(starts):
        seed_t = (float(seed[0]), float(seed[1]), float(seed[2]))
        if not np.isnan(blow_times[i]):
            failures.append(SeedFailure(point=seed_t, time=float(blow_times[i])))
            continue
        if bounding_box is not None:
            outside = np.flatnonzero(np.max(np.abs(window[i]), axis=1) > bounding_box)
            if outside.size:
                failures.append(
                    SeedFailure(
                        point=seed_t,
                        time=float(times[2 + outside[0]]),
                        reason="left-bounding-box",
                    )
                )
                continue
        points.extend((float(p[0]), float(p[1]), float(p[2])) for p in window[i])

    if failures:
        logger.warning("%d of %d seeds excluded from the sample", len(failures), len(starts))
    if not points:
        raise EmptySample("every seed blew up or left the bounding box")
    logger.info("Sampled %d points from %d seeds", len(points), len(starts) - len(failures))
    return AttractorSample(
        points=points,
        transient_skipped=t_transient,
        source=SampleSource.TRAJECTORY,
        bounding_box=bounding_box,
        failures=failures,
    )
