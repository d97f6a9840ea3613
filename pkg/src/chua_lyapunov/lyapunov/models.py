"""Data models for exponent sets, attractor samples and dimension reports."""

from __future__ import annotations

import math
from collections.abc import Iterable
from enum import Enum

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

Triple = tuple[float, float, float]


class OrderedExponents(BaseModel):
    """A descending triple of finite exponents.

    Attributes:
        values: lambda1 >= lambda2 >= lambda3.
    """

    model_config = ConfigDict(frozen=True)

    values: Triple = Field(..., description="Exponents, descending")

    @field_validator("values")
    @classmethod
    def _check_values(cls, values: Triple) -> Triple:
        if not all(math.isfinite(v) for v in values):
            raise ValueError(f"exponents must be finite: {values}")
        if not (values[0] >= values[1] >= values[2]):
            raise ValueError(f"exponents must be descending: {values}")
        return values

    @classmethod
    def from_unsorted(cls, values: Iterable[float]) -> OrderedExponents:
        ordered = sorted((float(v) for v in values), reverse=True)
        if len(ordered) != 3:
            raise ValueError(f"expected three exponents, got {len(ordered)}")
        return cls(values=(ordered[0], ordered[1], ordered[2]))


class SampleSource(str, Enum):
    """Where an attractor sample came from."""

    TRAJECTORY = "trajectory-sampling"
    USER = "user-supplied"


class SeedFailure(BaseModel):
    """A seed (or sample point) excluded from a batched computation.

    Attributes:
        point: The initial point.
        time: Time at which it failed.
        reason: ``blow-up`` or ``left-bounding-box``.
    """

    point: Triple = Field(..., description="Initial point")
    time: float = Field(..., description="Failure time")
    reason: str = Field(default="blow-up", description="Failure reason")


class AttractorSample(BaseModel):
    """A finite point cloud standing in for an invariant set K.

    Attributes:
        points: Sample points.
        transient_skipped: Transient time discarded before sampling.
        source: How the points were produced.
        bounding_box: Half-width of the box |x|,|y|,|z| <= b that every point
            must lie in, if configured.
        failures: Seeds excluded while sampling.
    """

    model_config = ConfigDict(frozen=True)

    points: list[Triple] = Field(..., min_length=1, description="Sample points")
    transient_skipped: float = Field(default=0.0, ge=0.0, description="Transient discarded")
    source: SampleSource = Field(default=SampleSource.USER, description="Sample origin")
    bounding_box: float | None = Field(default=None, gt=0.0, description="Box half-width")
    failures: list[SeedFailure] = Field(default_factory=list, description="Excluded seeds")

    @model_validator(mode="after")
    def _check_points(self) -> AttractorSample:
        arr = np.asarray(self.points, dtype=np.float64)
        if not np.all(np.isfinite(arr)):
            raise ValueError("sample points must be finite")
        if self.bounding_box is not None and np.max(np.abs(arr)) > self.bounding_box:
            raise ValueError(f"sample points leave the bounding box {self.bounding_box}")
        return self

    @property
    def array(self) -> NDArray[np.float64]:
        return np.asarray(self.points, dtype=np.float64)

    def __len__(self) -> int:
        return len(self.points)

    @classmethod
    def from_points(cls, points: ArrayLike, bounding_box: float | None = None) -> AttractorSample:
        """Wrap user-supplied points, shape (n, 3)."""
        arr = np.atleast_2d(np.asarray(points, dtype=np.float64))
        return cls(
            points=[(float(p[0]), float(p[1]), float(p[2])) for p in arr],
            source=SampleSource.USER,
            bounding_box=bounding_box,
        )


class PointDimension(BaseModel):
    """Finite-time local dimension at one sample point."""

    point: Triple = Field(..., description="Initial point")
    les: Triple = Field(..., description="Finite-time exponents, descending")
    dim: float = Field(..., ge=0.0, le=3.0, description="Local Kaplan-Yorke dimension")


class LadderRung(BaseModel):
    """Set dimension at one horizon of a ladder.

    Attributes:
        t: Horizon.
        set_dimension: Maximum local dimension over the sample at ``t``.
        tail_minimum: Minimum of ``set_dimension`` over this and all later rungs.
    """

    t: float = Field(..., gt=0.0, description="Horizon")
    set_dimension: float = Field(..., ge=0.0, le=3.0, description="Set dimension at t")
    tail_minimum: float = Field(..., ge=0.0, le=3.0, description="Running tail minimum")


class DimensionReport(BaseModel):
    """Finite-time Lyapunov dimension of a sampled set.

    Attributes:
        horizon: Horizon of the per-point distribution.
        points: Per-point exponents and local dimensions at ``horizon``.
        max: Set dimension, the maximum local dimension.
        excluded: Points that blew up and were left out.
        ladder: Set dimension over a ladder of horizons.
        liminf_proxy: Infimum of the ladder; a proxy, not the true limit.
        analytic_bound: Eigenvalue-based upper bound, when computed.
        convergence_verdict: Global convergence verdict, when computed.
        classification_verdict: Self-excited/hidden verdict, when computed.
    """

    horizon: float = Field(..., gt=0.0, description="Horizon t")
    points: list[PointDimension] = Field(..., min_length=1, description="Per-point results")
    max: float = Field(..., ge=0.0, le=3.0, description="Set dimension")
    excluded: list[SeedFailure] = Field(default_factory=list, description="Excluded points")
    ladder: list[LadderRung] = Field(default_factory=list, description="Horizon ladder")
    liminf_proxy: float | None = Field(default=None, description="Infimum over the ladder")
    analytic_bound: float | None = Field(default=None, description="Analytic dimension bound")
    convergence_verdict: str | None = Field(default=None, description="Convergence verdict")
    classification_verdict: str | None = Field(default=None, description="Attractor verdict")

    @model_validator(mode="after")
    def _check_max(self) -> DimensionReport:
        if self.max != max(p.dim for p in self.points):
            raise ValueError("max must equal the largest local dimension")
        return self

    @property
    def dims(self) -> NDArray[np.float64]:
        return np.asarray([p.dim for p in self.points], dtype=np.float64)
