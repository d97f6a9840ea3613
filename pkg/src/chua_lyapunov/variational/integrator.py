"""Batched time stepping of the state and its variational equation.

The state, the tangent frame and the running integral of trace J are
advanced as one augmented system per row:

    [u (3) | V row-major (9) | integral of trace J (1)]

so the tangent flow and the Liouville accumulator see exactly the discrete
trajectory. Rows are independent; a row that leaves the blow-up ball is
dropped from further stepping and its divergence time recorded.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray

from chua_lyapunov.errors import BlowUp, StepUnderflow, TangentOverflow
from chua_lyapunov.model import ChuaMemristor, Parameters, SmoothSystem, as_state
from chua_lyapunov.variational.models import IntegrationMethod, IntegratorConfig

logger = logging.getLogger(__name__)

MIN_STEP = 1e-14
TANGENT_LIMIT = 1e300

# Dormand-Prince 5(4) tableau
_C = (0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0)
_A = (
    (),
    (1.0 / 5.0,),
    (3.0 / 40.0, 9.0 / 40.0),
    (44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0),
    (19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0),
    (9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0),
    (35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0),
)
_B5 = (35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0)
_B4 = (
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
)
_E = tuple(b5 - b4 for b5, b4 in zip(_B5, _B4))
_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0


def as_system(model: Parameters | SmoothSystem) -> SmoothSystem:
    """Wrap bare ``Parameters`` in the Chua memristor system."""
    if isinstance(model, Parameters):
        return ChuaMemristor(model)
    return model


@dataclass
class Trajectory:
    """Sampled solution of the state equation.

    Attributes:
        times: Sample times, shape (n,).
        states: States at the sample times, shape (n, 3).
    """

    times: NDArray[np.float64]
    states: NDArray[np.float64]

    @property
    def final(self) -> NDArray[np.float64]:
        return self.states[-1]

    def __len__(self) -> int:
        return len(self.times)


@dataclass
class SegmentResult:
    """Outcome of advancing a batch across one time segment.

    Attributes:
        y: Augmented states at the segment end; rows that blew up are NaN.
        blow_times: Divergence time per row, NaN for rows still alive.
        steps: Number of accepted steps taken.
    """

    y: NDArray[np.float64]
    blow_times: NDArray[np.float64]
    steps: int = 0

    @property
    def alive(self) -> NDArray[np.bool_]:
        return np.isnan(self.blow_times)


@dataclass
class FlowStepper:
    """Advances batches of augmented states with RK4 or adaptive RK45.

    Args:
        system: The vector field.
        cfg: Integrator settings.
        tangent: Also advance the 3x3 tangent frame.
        tangent_limit: Raise ``TangentOverflow`` when a tangent entry exceeds
            this magnitude; None disables the check.

    Example:
        ```python
        stepper = FlowStepper(ChuaMemristor(p), IntegratorConfig(), tangent=True)
        y = stepper.initial_state(np.zeros((4, 3)))
        result = stepper.advance(y, 0.0, 1.0)
        ```
    """

    system: SmoothSystem
    cfg: IntegratorConfig
    tangent: bool = False
    tangent_limit: float | None = None
    _next_step: float = field(default=0.0, init=False, repr=False)

    def __post_init__(self) -> None:
        self._next_step = self.cfg.dt

    @property
    def width(self) -> int:
        return 13 if self.tangent else 4

    def initial_state(self, u0: ArrayLike) -> NDArray[np.float64]:
        """Augmented states for initial points ``u0`` of shape (B, 3)."""
        u = np.atleast_2d(as_state(u0))
        y = np.zeros((u.shape[0], self.width))
        y[:, :3] = u
        if self.tangent:
            y[:, 3:12] = np.eye(3).reshape(9)
        return y

    def _rhs(self, y: NDArray[np.float64]) -> NDArray[np.float64]:
        u = y[:, :3]
        out = np.empty_like(y)
        out[:, :3] = self.system.vector_field(u)
        if self.tangent:
            v = y[:, 3:12].reshape(-1, 3, 3)
            out[:, 3:12] = self.system.jacobian_action(u, v).reshape(-1, 9)
        out[:, -1] = self.system.divergence(u)
        return out

    def _rk4(self, y: NDArray[np.float64], h: float) -> NDArray[np.float64]:
        k1 = self._rhs(y)
        k2 = self._rhs(y + (0.5 * h) * k1)
        k3 = self._rhs(y + (0.5 * h) * k2)
        k4 = self._rhs(y + h * k3)
        return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    def _dopri(
        self, y: NDArray[np.float64], h: float
    ) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        ks: list[NDArray[np.float64]] = []
        for stage in range(7):
            yi = y
            for coef, k in zip(_A[stage], ks):
                if coef != 0.0:
                    yi = yi + (h * coef) * k
            ks.append(self._rhs(yi))
        y_new = y + h * sum(b * k for b, k in zip(_B5, ks) if b != 0.0)
        err = h * sum(e * k for e, k in zip(_E, ks) if e != 0.0)
        scale = self.cfg.abs_tol + self.cfg.rel_tol * np.maximum(np.abs(y), np.abs(y_new))
        with np.errstate(invalid="ignore", over="ignore"):
            norm = np.sqrt(np.mean((err / scale) ** 2, axis=1))
        return y_new, norm

    def _diverged(self, y: NDArray[np.float64]) -> NDArray[np.bool_]:
        u = y[:, :3]
        with np.errstate(invalid="ignore", over="ignore"):
            norm = np.sqrt(np.sum(u * u, axis=1))
        return ~(np.all(np.isfinite(y), axis=1) & (norm <= self.cfg.blowup_norm))

    def _check_tangent(self, y: NDArray[np.float64], t: float) -> None:
        if self.tangent and self.tangent_limit is not None and y.size:
            if np.max(np.abs(y[:, 3:12])) > self.tangent_limit:
                raise TangentOverflow(t)

    def advance(self, y: NDArray[np.float64], t0: float, t1: float) -> SegmentResult:
        """Advance every row of ``y`` from ``t0`` to ``t1``.

        Fixed-step RK4 splits the segment into ``ceil(len/dt)`` equal steps so
        that ``t1`` is hit exactly. The adaptive method carries its step
        proposal across calls and clips the last step to land on ``t1``.

        Raises:
            StepUnderflow: If the adaptive controller needs a step < 1e-14.
            TangentOverflow: If ``tangent_limit`` is set and exceeded.
        """
        n_rows = y.shape[0]
        blow_times = np.full(n_rows, np.nan)
        out = np.full_like(y, np.nan)
        rows = np.arange(n_rows)
        work = y.copy()
        length = t1 - t0
        if length <= 0.0 or n_rows == 0:
            out[:] = y
            return SegmentResult(out, blow_times, 0)

        if self.cfg.method is IntegrationMethod.RK4:
            n_steps = max(1, math.ceil(length / self.cfg.dt - 1e-9))
            h = length / n_steps
            steps = 0
            for i in range(1, n_steps + 1):
                work = self._rk4(work, h)
                steps += 1
                t = t0 + i * h
                bad = self._diverged(work)
                if bad.any():
                    blow_times[rows[bad]] = t
                    rows, work = rows[~bad], work[~bad]
                    if rows.size == 0:
                        break
                self._check_tangent(work, t)
        else:
            rows, work, steps = self._advance_adaptive(work, rows, blow_times, t0, t1)

        out[rows] = work
        return SegmentResult(out, blow_times, steps)

    def _advance_adaptive(
        self,
        work: NDArray[np.float64],
        rows: NDArray[np.intp],
        blow_times: NDArray[np.float64],
        t0: float,
        t1: float,
    ) -> tuple[NDArray[np.intp], NDArray[np.float64], int]:
        t = t0
        steps = 0
        landing_slack = 1e-12 * max(1.0, abs(t1))
        while t1 - t > landing_slack and rows.size:
            h = self._next_step
            landing = t + h >= t1 - landing_slack
            if landing:
                h = t1 - t
            y_new, err = self._dopri(work, h)
            bad = self._diverged(y_new)
            worst = float(np.max(err[~bad])) if (~bad).any() else 0.0
            if worst <= 1.0:
                t = t1 if landing else t + h
                work = y_new
                steps += 1
                if bad.any():
                    blow_times[rows[bad]] = t
                    rows, work = rows[~bad], work[~bad]
                self._check_tangent(work, t)
            factor = _MAX_FACTOR if worst == 0.0 else _SAFETY * worst ** -0.2
            factor = min(_MAX_FACTOR, max(_MIN_FACTOR, factor))
            if not (landing and worst <= 1.0):
                self._next_step = h * factor
            if self._next_step < MIN_STEP:
                raise StepUnderflow(t, self._next_step)
        return rows, work, steps


def _sample_times(t: float, stride: float) -> NDArray[np.float64]:
    n = max(1, math.ceil(t / stride - 1e-9))
    times = np.arange(n + 1, dtype=np.float64) * stride
    times[-1] = t
    return times


def integrate_batch(
    model: Parameters | SmoothSystem,
    u0: ArrayLike,
    times: ArrayLike,
    cfg: IntegratorConfig,
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Integrate many initial points and sample them at common times.

    Args:
        model: Parameters of the Chua model or any ``SmoothSystem``.
        u0: Initial points, shape (B, 3).
        times: Ascending sample times starting at 0.
        cfg: Integrator settings.

    Returns:
        ``(states, blow_times)`` with states of shape (B, len(times), 3),
        NaN from the first sample after a row's divergence, and the
        divergence time per row (NaN when bounded).
    """
    sample = np.asarray(times, dtype=np.float64)
    stepper = FlowStepper(as_system(model), cfg)
    y = stepper.initial_state(u0)
    n_rows = y.shape[0]
    states = np.full((n_rows, len(sample), 3), np.nan)
    blow_times = np.full(n_rows, np.nan)
    alive = np.ones(n_rows, dtype=bool)
    states[:, 0] = y[:, :3]
    for k in range(1, len(sample)):
        idx = np.flatnonzero(alive)
        if idx.size == 0:
            break
        seg = stepper.advance(y[idx], float(sample[k - 1]), float(sample[k]))
        y[idx] = seg.y
        dead = ~seg.alive
        blow_times[idx[dead]] = seg.blow_times[dead]
        alive[idx[dead]] = False
        states[idx, k] = seg.y[:, :3]
    if not alive.all():
        logger.info("%d of %d trajectories blew up", int((~alive).sum()), n_rows)
    return states, blow_times


def integrate(
    model: Parameters | SmoothSystem,
    u0: ArrayLike,
    t: float,
    cfg: IntegratorConfig,
) -> Trajectory:
    """Integrate the state equation from ``u0`` over ``[0, t]``.

    Samples are stored every ``cfg.stride`` time units plus the final time.

    Args:
        model: Parameters of the Chua model or any ``SmoothSystem``.
        u0: Initial point.
        t: Horizon, ``t >= 0``.
        cfg: Integrator settings.

    Returns:
        The sampled trajectory; for ``t == 0`` the single sample ``(0, u0)``.

    Raises:
        ValueError: If ``t`` is negative.
        BlowUp: If the solution leaves the blow-up ball. The exception carries
            the samples taken before divergence.
        StepUnderflow: From the adaptive controller.
    """
    if t < 0.0:
        raise ValueError("t must be nonnegative")
    start = as_state(u0).reshape(3)
    if t == 0.0:
        return Trajectory(np.zeros(1), start[None, :].copy())

    times = _sample_times(t, cfg.stride)
    stepper = FlowStepper(as_system(model), cfg)
    y = stepper.initial_state(start)
    states = np.empty((len(times), 3))
    states[0] = start
    for k in range(1, len(times)):
        seg = stepper.advance(y, float(times[k - 1]), float(times[k]))
        if not seg.alive[0]:
            logger.debug("Trajectory from %s blew up at t=%.6g", start, seg.blow_times[0])
            raise BlowUp(float(seg.blow_times[0]), times[:k].copy(), states[:k].copy())
        y = seg.y
        states[k] = y[0, :3]
    return Trajectory(times, states)
