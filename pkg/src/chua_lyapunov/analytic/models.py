"""Data models for the analytic dimension and convergence criteria."""

from __future__ import annotations

from enum import Enum
from typing import Literal

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, model_validator

from chua_lyapunov.model import Parameters

Triple = tuple[float, float, float]
Matrix = tuple[Triple, Triple, Triple]

IDENTITY: Matrix = ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0))
S_DETERMINANT_FLOOR = 1e-12


class CertificateConfig(BaseModel):
    """Settings for the eigenvalue-based criteria.

    Attributes:
        S: Constant change-of-basis matrix (default identity).
        s_grid: Step of the s grid on [0, 1].
        x_min: Lower end of the x interval for grid suprema.
        x_max: Upper end of the x interval for grid suprema.
        x_points: Number of x grid points.
        V: Auxiliary function; only the zero function is supported.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    S: Matrix = Field(default=IDENTITY, description="Change-of-basis matrix, row-major")
    s_grid: float = Field(default=1e-3, gt=0.0, le=1.0, description="Step of the s grid")
    x_min: float = Field(default=-10.0, description="Lower end of the x interval")
    x_max: float = Field(default=10.0, description="Upper end of the x interval")
    x_points: int = Field(default=4001, ge=2, description="Number of x grid points")
    V: Literal["zero"] = Field(default="zero", description="Auxiliary function (zero only)")

    @model_validator(mode="after")
    def _check(self) -> CertificateConfig:
        if not (self.x_min <= 0.0 <= self.x_max) or self.x_min == self.x_max:
            raise ValueError("x interval must contain 0 and have positive length")
        s = self.s_matrix
        if not np.all(np.isfinite(s)) or abs(np.linalg.det(s)) <= S_DETERMINANT_FLOOR:
            raise ValueError("S must be nonsingular (|det S| > 1e-12)")
        return self

    @property
    def s_matrix(self) -> NDArray[np.float64]:
        return np.asarray(self.S, dtype=np.float64)

    @property
    def is_identity(self) -> bool:
        return self.S == IDENTITY

    def x_grid(self) -> NDArray[np.float64]:
        """The x grid, always containing 0."""
        grid = np.linspace(self.x_min, self.x_max, self.x_points)
        if not np.any(grid == 0.0):
            grid = np.sort(np.append(grid, 0.0))
        return grid


class ConvergenceVerdictKind(str, Enum):
    """Outcome of the global convergence criterion."""

    CONVERGES = "Converges"
    INCONCLUSIVE = "Inconclusive"


class ConvergenceVerdict(BaseModel):
    """Global convergence certificate.

    Attributes:
        verdict: ``Converges`` when the supremum of lambda1 + lambda2 is negative.
        margin: Minus that supremum; positive iff the verdict is ``Converges``.
        supremum: Supremum of lambda1 + lambda2 over the phase space (or grid).
        reduction: ``exact-at-origin`` (S = I, alpha*m1 > 0) or ``grid``.
        x_interval: Grid interval when ``reduction`` is ``grid``.
    """

    verdict: ConvergenceVerdictKind = Field(..., description="Verdict")
    margin: float = Field(..., description="-(sup of lambda1 + lambda2)")
    supremum: float = Field(..., description="sup of lambda1 + lambda2")
    reduction: Literal["exact-at-origin", "grid"] = Field(..., description="How sup was found")
    x_interval: tuple[float, float] | None = Field(default=None, description="Grid interval")

    @property
    def converges(self) -> bool:
        return self.verdict is ConvergenceVerdictKind.CONVERGES


class DimensionCertificate(BaseModel):
    """A (j, s) pair satisfying the dimension criterion on the x grid.

    Attributes:
        j: Integer part, 1 or 2.
        s: Grid value of s in [0, 1].
        bound: Certified bound j + s.
        s_refined: Bisection refinement of the feasibility boundary.
        grid_supremum: Grid supremum of the criterion at (j, s); negative.
        x_interval: Interval of the x grid.
    """

    j: int = Field(..., ge=1, le=2, description="Integer part")
    s: float = Field(..., ge=0.0, le=1.0, description="Fractional part (grid value)")
    bound: float = Field(..., description="j + s")
    s_refined: float = Field(..., ge=0.0, le=1.0, description="Refined fractional part")
    grid_supremum: float = Field(..., lt=0.0, description="Grid supremum of the criterion")
    x_interval: tuple[float, float] = Field(..., description="x grid interval")


class Lemma1Result(BaseModel):
    """Domination of the symmetrized spectrum by its value at the origin.

    Attributes:
        holds: lambda_j(u) <= lambda_j(0) (with 1e-12 slack) at every sample.
        worst_margin: min over samples and j of lambda_j(0) - lambda_j(u).
        samples: Number of points checked.
    """

    holds: bool = Field(..., description="Domination holds at every sample")
    worst_margin: float = Field(..., description="Smallest lambda_j(0) - lambda_j(u)")
    samples: int = Field(..., ge=1, description="Points checked")


class ExactDimension(BaseModel):
    """Exact Lyapunov dimension from the eigenvalues of J(0), when admissible.

    Attributes:
        value: Kaplan-Yorke value of eig J(0), or None when the eigenvalues
            are not real and simple.
        real_simple: Whether eig J(0) are real with pairwise separation
            above 1e-9 * (1 + scale) and positive discriminant.
        eigenvalues: Real parts of eig J(0), descending.
        discriminant: Discriminant of the characteristic cubic.
        symmetrized_value: Kaplan-Yorke value of the symmetrized spectrum at 0,
            reported for comparison (the two spectra differ for non-normal J(0)).
    """

    value: float | None = Field(default=None, description="Exact dimension, if admissible")
    real_simple: bool = Field(..., description="eig J(0) real and simple")
    eigenvalues: Triple = Field(..., description="Real parts of eig J(0), descending")
    discriminant: float = Field(..., description="Characteristic cubic discriminant")
    symmetrized_value: float = Field(..., description="KY of the symmetrized spectrum at 0")


class EquilibriumDimension(BaseModel):
    """Local Lyapunov dimension at an equilibrium.

    Attributes:
        label: Equilibrium label.
        point: Coordinates.
        real_parts: Real parts of eig J(u_eq), descending.
        all_real: Whether all eigenvalues are real.
        local_dimension: Kaplan-Yorke value of ``real_parts``, the limit of the
            finite-time local dimension at the equilibrium.
        unstable: Whether some eigenvalue has positive real part.
    """

    label: str = Field(..., description="Equilibrium label")
    point: Triple = Field(..., description="Coordinates")
    real_parts: Triple = Field(..., description="Real parts of eig J, descending")
    all_real: bool = Field(..., description="All eigenvalues real")
    local_dimension: float = Field(..., ge=0.0, le=3.0, description="KY of real parts")
    unstable: bool = Field(..., description="Some real part positive")


class NonsingularityCheck(BaseModel):
    """Whether det J(u) vanishes anywhere; det J depends on x only.

    Attributes:
        holds: det J(u) != 0 for every u.
        critical_abs_x: The |x| at which det J vanishes, when it does.
        det_at_origin: det J(0).
    """

    holds: bool = Field(..., description="det J(u) != 0 everywhere")
    critical_abs_x: float | None = Field(default=None, description="|x| with det J = 0")
    det_at_origin: float = Field(..., description="det J(0)")


class Premises(BaseModel):
    """Which hypotheses of the analytic results were verified."""

    estimates_applicable: bool = Field(..., description="alpha*m1 > 0")
    jacobian_real_simple: bool = Field(..., description="eig J(0) real and simple")
    lambda12_negative: bool = Field(..., description="lambda1(0) + lambda2(0) < 0")
    jacobian_nonsingular: bool = Field(..., description="det J(u) != 0 for all u")
    x0_zero: bool = Field(..., description="x0 = 0")
    gamma_zero: bool = Field(..., description="gamma = 0")
    s_identity: bool = Field(..., description="S is the identity")
    symmetrized_matches_jacobian: bool = Field(
        ..., description="eig J(0) equal the symmetrized eigenvalues at 0 (to 1e-9)"
    )


class AnalyticReport(BaseModel):
    """All analytic results for one parameter set.

    Attributes:
        parameters: The model parameters.
        lambda0: Symmetrized spectrum at the origin, descending.
        exact_dim: Exact dimension (J(0) eigenvalues real and simple), else None.
        exact: Details of the exact-dimension computation.
        bound_dim: Upper bound of the Lyapunov dimension in [0, 3].
        bound_source: ``corollary2``, ``theorem3-grid`` or ``trivial``.
        certificate: (j, s) certificate, when one exists on the grid.
        convergence: Global convergence verdict, when the criterion applies.
        entropy_bound: Sum of positive entries of ``lambda0``.
        lemma1: Domination check on the x grid (alpha*m1 > 0 only).
        nonsingularity: Check of det J(u) != 0.
        equilibria: Local dimensions at the equilibria.
        premises: Hypothesis flags.
        corollary2_reading: The change-of-basis matrix used for the
            reduction to the origin (the identity).
    """

    parameters: Parameters = Field(..., description="Model parameters")
    lambda0: Triple = Field(..., description="Symmetrized spectrum at 0")
    exact_dim: float | None = Field(default=None, description="Exact Lyapunov dimension")
    exact: ExactDimension = Field(..., description="Exact-dimension details")
    bound_dim: float = Field(..., ge=0.0, le=3.0, description="Dimension upper bound")
    bound_source: Literal["corollary2", "theorem3-grid", "trivial"] = Field(
        ..., description="Where the bound comes from"
    )
    certificate: DimensionCertificate | None = Field(default=None, description="(j, s)")
    convergence: ConvergenceVerdict | None = Field(default=None, description="Convergence")
    entropy_bound: float = Field(..., ge=0.0, description="Entropy upper bound")
    lemma1: Lemma1Result | None = Field(default=None, description="Domination check")
    nonsingularity: NonsingularityCheck = Field(..., description="det J check")
    equilibria: list[EquilibriumDimension] = Field(
        default_factory=list, description="Equilibrium dimensions"
    )
    premises: Premises = Field(..., description="Hypothesis flags")
    corollary2_reading: str = Field(default="S=I", description="Reduction basis")
