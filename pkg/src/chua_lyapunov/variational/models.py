"""Data models for integration and finite-time Lyapunov exponents."""

from __future__ import annotations

from enum import Enum

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, model_validator

from chua_lyapunov.linalg3 import Spectrum, SpectrumKind


class IntegrationMethod(str, Enum):
    """Supported time steppers."""

    RK4 = "fixed-RK4"
    RK45 = "adaptive-RK45"


class LyapunovRoute(str, Enum):
    """How finite-time exponents are obtained."""

    BENETTIN = "benettin"
    SVD = "svd"


class IntegratorConfig(BaseModel):
    """Integrator settings shared by every trajectory computation.

    Attributes:
        method: Fixed-step RK4 (default) or adaptive Dormand-Prince RK45.
        dt: Fixed step, or initial step for the adaptive method.
        abs_tol: Absolute tolerance (adaptive only).
        rel_tol: Relative tolerance (adaptive only).
        qr_interval: Time between Benettin reorthonormalizations.
        blowup_norm: States with a larger Euclidean norm count as diverged.
        sample_stride: Time between stored trajectory samples; defaults to dt.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    method: IntegrationMethod = Field(default=IntegrationMethod.RK4, description="Time stepper")
    dt: float = Field(default=1e-3, gt=0.0, description="Fixed or initial step size")
    abs_tol: float = Field(default=1e-9, gt=0.0, le=1e-2, description="Absolute tolerance")
    rel_tol: float = Field(default=1e-9, gt=0.0, le=1e-2, description="Relative tolerance")
    qr_interval: float = Field(default=0.5, gt=0.0, description="Time between QR steps")
    blowup_norm: float = Field(default=1e6, gt=0.0, description="Divergence cutoff on |u|")
    sample_stride: float | None = Field(
        default=None, gt=0.0, description="Trajectory sampling stride (default: dt)"
    )

    @model_validator(mode="after")
    def _check_intervals(self) -> IntegratorConfig:
        if self.qr_interval < self.dt:
            raise ValueError(f"qr_interval ({self.qr_interval}) must be >= dt ({self.dt})")
        return self

    @property
    def stride(self) -> float:
        return self.sample_stride if self.sample_stride is not None else self.dt


class FiniteTimeSpectrum(BaseModel):
    """Finite-time Lyapunov exponents at (t, u0) with accumulation metadata.

    Attributes:
        t: Time horizon.
        u0: Initial point.
        les: Exponents (1/t) ln sigma_i of the fundamental matrix, descending.
        route: ``benettin`` or ``svd``.
        steps: QR renormalizations (benettin) or integration steps (svd).
        trace_average: Time average of trace J along the computed trajectory.
        qr_diagonal: Classical Benettin estimates (1/t) sum ln R_ii, descending;
            only for the benettin route.
        final_state: State reached at time t.
    """

    model_config = ConfigDict(frozen=True)

    t: float = Field(..., gt=0.0, description="Time horizon")
    u0: tuple[float, float, float] = Field(..., description="Initial point")
    les: tuple[float, float, float] = Field(..., description="Finite-time exponents")
    route: LyapunovRoute = Field(..., description="Computation route")
    steps: int = Field(..., ge=0, description="QR steps or integration steps")
    trace_average: float = Field(..., description="Time average of trace J")
    qr_diagonal: tuple[float, float, float] | None = Field(
        default=None, description="Per-column Benettin sums divided by t"
    )
    final_state: tuple[float, float, float] | None = Field(
        default=None, description="State at time t"
    )
    history: list[tuple[float, float, float, float]] = Field(
        default_factory=list, exclude=True, description="(t, le1, le2, le3) per QR step"
    )

    @model_validator(mode="after")
    def _check_order(self) -> FiniteTimeSpectrum:
        a, b, c = self.les
        if not (a >= b >= c):
            raise ValueError(f"exponents must be descending: {self.les}")
        return self

    @property
    def spectrum(self) -> Spectrum:
        return Spectrum(self.les, SpectrumKind.FINITE_TIME_EXPONENTS)

    @property
    def les_sum(self) -> float:
        return float(np.sum(self.les))

    def les_array(self) -> NDArray[np.float64]:
        return np.asarray(self.les, dtype=np.float64)
