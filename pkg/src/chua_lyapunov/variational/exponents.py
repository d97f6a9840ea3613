"""Fundamental matrices and finite-time Lyapunov exponents.

Two routes are provided:

- ``finite_time_les_svd``: integrate the fundamental matrix directly and take
  its singular values. Definitional, limited to horizons where the matrix
  stays representable.
- ``finite_time_les_benettin``: reorthonormalize the tangent frame with QR
  every ``qr_interval``. The product of the R factors is kept in graded form
  ``diag(exp(l)) @ W`` with W upper triangular and row-normalized, so its
  singular values (which equal those of the fundamental matrix) are
  available at any horizon without overflow. The classical per-column
  sums of ln R_ii are reported alongside as ``qr_diagonal``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray

from chua_lyapunov.errors import BlowUp
from chua_lyapunov.linalg3 import (
    Matrix3,
    graded_log_singular_values,
    log_singular_values,
    qr_positive,
)
from chua_lyapunov.model import Parameters, SmoothSystem, as_state
from chua_lyapunov.variational.integrator import TANGENT_LIMIT, FlowStepper, as_system
from chua_lyapunov.variational.models import FiniteTimeSpectrum, IntegratorConfig, LyapunovRoute

logger = logging.getLogger(__name__)

_BOUNDARY_MERGE = 1e-9
_MAX_LOG_GAP = 700.0
_DIAG = (np.arange(3), np.arange(3))


def _as_tuple(v: NDArray[np.float64]) -> tuple[float, float, float]:
    return (float(v[0]), float(v[1]), float(v[2]))


@dataclass
class BatchSpectra:
    """Benettin results for a batch of initial points at several horizons.

    Arrays are indexed ``[horizon, row]``; rows that blew up hold NaN.

    Attributes:
        u0: Initial points, shape (B, 3).
        horizons: Distinct ascending horizons, shape (H,).
        les: Exponents, shape (H, B, 3), descending along the last axis.
        qr_diagonal: Classical Benettin sums / t, shape (H, B, 3).
        trace_average: Time average of trace J, shape (H, B).
        final_states: States at each horizon, shape (H, B, 3).
        steps: QR renormalizations performed up to each horizon, shape (H,).
        blow_times: Divergence time per row, NaN for bounded rows.
        history_times: Times of every QR step (only when history was requested).
        history_les: Exponents at ``history_times``, shape (K, B, 3).
    """

    u0: NDArray[np.float64]
    horizons: NDArray[np.float64]
    les: NDArray[np.float64]
    qr_diagonal: NDArray[np.float64]
    trace_average: NDArray[np.float64]
    final_states: NDArray[np.float64]
    steps: NDArray[np.int64]
    blow_times: NDArray[np.float64]
    history_times: NDArray[np.float64] = field(default_factory=lambda: np.zeros(0))
    history_les: NDArray[np.float64] = field(default_factory=lambda: np.zeros((0, 0, 3)))

    @property
    def alive(self) -> NDArray[np.bool_]:
        return np.isnan(self.blow_times)

    def horizon_index(self, t: float) -> int:
        matches = np.flatnonzero(self.horizons == t)
        if matches.size == 0:
            raise KeyError(f"horizon {t} was not computed")
        return int(matches[0])

    def spectrum(self, h: int, row: int) -> FiniteTimeSpectrum:
        """The ``FiniteTimeSpectrum`` of one row at horizon index ``h``.

        Raises:
            BlowUp: If the row diverged before that horizon.
        """
        bt = self.blow_times[row]
        if not np.isnan(bt) and bt <= self.horizons[h]:
            raise BlowUp(float(bt))
        history: list[tuple[float, float, float, float]] = []
        if self.history_times.size:
            for t, les in zip(self.history_times, self.history_les[:, row]):
                if t > self.horizons[h]:
                    break
                history.append((float(t), float(les[0]), float(les[1]), float(les[2])))
        return FiniteTimeSpectrum(
            t=float(self.horizons[h]),
            u0=_as_tuple(self.u0[row]),
            les=_as_tuple(self.les[h, row]),
            route=LyapunovRoute.BENETTIN,
            steps=int(self.steps[h]),
            trace_average=float(self.trace_average[h, row]),
            qr_diagonal=_as_tuple(self.qr_diagonal[h, row]),
            final_state=_as_tuple(self.final_states[h, row]),
            history=history,
        )


def segment_boundaries(qr_interval: float, horizons: ArrayLike) -> NDArray[np.float64]:
    """QR times up to the largest horizon merged with the horizons themselves.

    Boundaries closer than 1e-9 (relative) collapse onto the horizon value,
    so a horizon that is a multiple of ``qr_interval`` adds no extra step.
    """
    hs = np.unique(np.asarray(horizons, dtype=np.float64))
    t_max = float(hs[-1])
    n_qr = int(math.floor(t_max / qr_interval + _BOUNDARY_MERGE))
    bounds = list(np.arange(1, n_qr + 1, dtype=np.float64) * qr_interval)
    for h in hs:
        tol = _BOUNDARY_MERGE * max(1.0, float(h))
        near = [i for i, b in enumerate(bounds) if abs(b - h) <= tol]
        if near:
            bounds[near[0]] = float(h)
        else:
            bounds.append(float(h))
    out = np.asarray(sorted(bounds), dtype=np.float64)
    return out[out <= t_max]


def lyapunov_batch(
    model: Parameters | SmoothSystem,
    u0: ArrayLike,
    horizons: ArrayLike,
    cfg: IntegratorConfig,
    history: bool = False,
) -> BatchSpectra:
    """Benettin exponents for many initial points at several horizons in one pass.

    Args:
        model: Parameters of the Chua model or any ``SmoothSystem``.
        u0: Initial points, shape (B, 3).
        horizons: Positive horizons; duplicates are computed once.
        cfg: Integrator settings.
        history: Record the exponents at every QR step.

    Returns:
        A ``BatchSpectra`` with one entry per distinct horizon. Rows that blow
        up are excluded from further stepping and keep NaN results.

    Raises:
        ValueError: If a horizon is not positive.
    """
    starts = np.atleast_2d(as_state(u0)).astype(np.float64)
    hs = np.unique(np.asarray(horizons, dtype=np.float64))
    if hs.size == 0 or not np.all(hs > 0.0):
        raise ValueError("horizons must be positive")

    stepper = FlowStepper(as_system(model), cfg, tangent=True)
    y = stepper.initial_state(starts)
    n_rows = y.shape[0]
    n_h = hs.size

    ell = np.zeros((n_rows, 3))
    w = np.broadcast_to(np.eye(3), (n_rows, 3, 3)).copy()
    qr_sum = np.zeros((n_rows, 3))
    alive = np.ones(n_rows, dtype=bool)
    blow_times = np.full(n_rows, np.nan)

    les = np.full((n_h, n_rows, 3), np.nan)
    qr_diag = np.full((n_h, n_rows, 3), np.nan)
    trace_avg = np.full((n_h, n_rows), np.nan)
    finals = np.full((n_h, n_rows, 3), np.nan)
    steps = np.zeros(n_h, dtype=np.int64)
    hist_t: list[float] = []
    hist_les: list[NDArray[np.float64]] = []

    t_prev = 0.0
    qr_steps = 0
    for t_b in segment_boundaries(cfg.qr_interval, hs):
        idx = np.flatnonzero(alive)
        if idx.size == 0:
            break
        seg = stepper.advance(y[idx], t_prev, float(t_b))
        dead = ~seg.alive
        if dead.any():
            blow_times[idx[dead]] = seg.blow_times[dead]
            alive[idx[dead]] = False
            logger.warning(
                "Excluded %d trajectories that blew up before t=%.6g", int(dead.sum()), t_b
            )
        ok = idx[seg.alive]
        ys = seg.y[seg.alive]
        t_prev = float(t_b)
        if ok.size == 0:
            continue

        q, r = qr_positive(ys[:, 3:12].reshape(-1, 3, 3))
        diag = r[:, _DIAG[0], _DIAG[1]]
        log_r = np.log(diag)
        unit = r / diag[:, :, None]
        e = ell[ok]
        gap = np.minimum(e[:, None, :] - e[:, :, None], _MAX_LOG_GAP)
        w_new = np.triu(unit * np.exp(gap)) @ w[ok]
        row_scale = np.max(np.abs(w_new), axis=2)
        w[ok] = w_new / row_scale[:, :, None]
        ell[ok] = e + log_r + np.log(row_scale)
        qr_sum[ok] += log_r
        ys[:, 3:12] = q.reshape(-1, 9)
        y[ok] = ys
        qr_steps += 1

        at_horizon = np.flatnonzero(hs == t_b)
        if history or at_horizon.size:
            # diag(W) underflows when a row is dominated by its off-diagonal
            # growth; log|det W| is tracked through the R diagonals instead.
            log_det_w = np.sum(qr_sum[ok], axis=1) - np.sum(ell[ok], axis=1)
            current = graded_log_singular_values(ell[ok], w[ok], log_det_w) / t_b
            if history:
                snapshot = np.full((n_rows, 3), np.nan)
                snapshot[ok] = current
                hist_t.append(float(t_b))
                hist_les.append(snapshot)
            for h in at_horizon:
                les[h, ok] = current
                qr_diag[h, ok] = -np.sort(-qr_sum[ok] / t_b, axis=1)
                trace_avg[h, ok] = ys[:, 12] / t_b
                finals[h, ok] = ys[:, :3]
                steps[h] = qr_steps

    return BatchSpectra(
        u0=starts,
        horizons=hs,
        les=les,
        qr_diagonal=qr_diag,
        trace_average=trace_avg,
        final_states=finals,
        steps=steps,
        blow_times=blow_times,
        history_times=np.asarray(hist_t, dtype=np.float64),
        history_les=np.asarray(hist_les) if hist_les else np.zeros((0, n_rows, 3)),
    )


def finite_time_les_benettin(
    model: Parameters | SmoothSystem,
    u0: ArrayLike,
    t: float,
    cfg: IntegratorConfig,
    history: bool = False,
) -> FiniteTimeSpectrum:
    """Finite-time Lyapunov exponents by QR reorthonormalization.

    Args:
        model: Parameters of the Chua model or any ``SmoothSystem``.
        u0: Initial point.
        t: Horizon, at least ``cfg.qr_interval``.
        cfg: Integrator settings.
        history: Record ``(t, le1, le2, le3)`` at every QR step.

    Raises:
        ValueError: If ``t < cfg.qr_interval``.
        BlowUp: If the base trajectory diverges.
    """
    if t < cfg.qr_interval:
        raise ValueError(f"t ({t}) must be >= qr_interval ({cfg.qr_interval})")
    batch = lyapunov_batch(model, as_state(u0).reshape(1, 3), [t], cfg, history=history)
    return batch.spectrum(0, 0)


def _propagate(
    model: Parameters | SmoothSystem, u0: ArrayLike, t: float, cfg: IntegratorConfig
) -> tuple[NDArray[np.float64], int]:
    stepper = FlowStepper(as_system(model), cfg, tangent=True, tangent_limit=TANGENT_LIMIT)
    y = stepper.initial_state(as_state(u0).reshape(1, 3))
    seg = stepper.advance(y, 0.0, t)
    if not seg.alive[0]:
        raise BlowUp(float(seg.blow_times[0]))
    return seg.y[0], seg.steps


def fundamental_matrix(
    model: Parameters | SmoothSystem, u0: ArrayLike, t: float, cfg: IntegratorConfig
) -> Matrix3:
    """The fundamental matrix of the variational equation at time ``t``.

    Returns the identity for ``t == 0``.

    Raises:
        ValueError: If ``t`` is negative.
        BlowUp: If the base trajectory diverges.
        TangentOverflow: If an entry exceeds 1e300; use the Benettin route.
    """
    if t < 0.0:
        raise ValueError("t must be nonnegative")
    if t == 0.0:
        return np.eye(3)
    y, _ = _propagate(model, u0, t, cfg)
    return y[3:12].reshape(3, 3).copy()


def finite_time_les_svd(
    model: Parameters | SmoothSystem, u0: ArrayLike, t: float, cfg: IntegratorConfig
) -> FiniteTimeSpectrum:
    """Finite-time Lyapunov exponents from the singular values of the fundamental matrix.

    Raises:
        ValueError: If ``t`` is not positive.
        BlowUp: If the base trajectory diverges.
        TangentOverflow: If the fundamental matrix overflows.
    """
    if not t > 0.0:
        raise ValueError("t must be positive")
    y, n_steps = _propagate(model, u0, t, cfg)
    logs = log_singular_values(y[3:12].reshape(3, 3))
    return FiniteTimeSpectrum(
        t=t,
        u0=_as_tuple(as_state(u0).reshape(3)),
        les=_as_tuple(logs / t),
        route=LyapunovRoute.SVD,
        steps=n_steps,
        trace_average=float(y[12] / t),
        final_state=_as_tuple(y[:3]),
    )
