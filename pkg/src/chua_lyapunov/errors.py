"""Exception hierarchy for chua-lyapunov.

Every public operation raises a subclass of ``ChuaLyapunovError`` so callers
can catch a single exception type regardless of which numerical stage failed.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    import numpy as np
    from numpy.typing import NDArray


class ChuaLyapunovError(Exception):
    """Base class for all toolkit errors."""


class DegenerateReduction(ChuaLyapunovError):
    """Raised when the equilibrium set is a continuum and cannot be listed."""


class EquilibriumResidualError(ChuaLyapunovError):
    """Raised when a polished equilibrium still violates the residual tolerance."""


class NotSymmetric(ChuaLyapunovError):
    """Raised when a matrix passed to the symmetric solver is not symmetric."""


class Singular(ChuaLyapunovError):
    """Raised when a QR column norm underflows."""


class SingularS(ChuaLyapunovError):
    """Raised when the change-of-basis matrix S is (numerically) singular."""


class AssumptionViolated(ChuaLyapunovError):
    """Raised when an analytic criterion is requested outside alpha*m1 > 0."""


class NoCertificate(ChuaLyapunovError):
    """Raised when no (j, s) pair satisfies the dimension criterion on the grid."""


class EmptySample(ChuaLyapunovError):
    """Raised when every seed or sample point of a batched computation failed."""


class StepUnderflow(ChuaLyapunovError):
    """Raised when the adaptive step-size controller drives dt below its floor."""

    def __init__(self, time: float, step: float) -> None:
        super().__init__(f"step size {step:.3e} underflowed at t={time:.6g}")
        self.time = time
        self.step = step


class TangentOverflow(ChuaLyapunovError):
    """Raised when a fundamental-matrix entry exceeds the overflow limit.

    Signals the caller to switch to the Benettin route.
    """

    def __init__(self, time: float) -> None:
        super().__init__(f"fundamental matrix overflowed at t={time:.6g}")
        self.time = time


class BlowUp(ChuaLyapunovError):
    """Raised when a solution leaves the blow-up ball (an unbounded solution).

    Attributes:
        time: Integration time at which the state norm first exceeded the cutoff.
        times: Sampled times up to the divergence, when available.
        states: Sampled states matching ``times``, when available.
    """

    def __init__(
        self,
        time: float,
        times: NDArray[np.float64] | None = None,
        states: NDArray[np.float64] | None = None,
    ) -> None:
        super().__init__(f"solution blew up at t={time:.6g}")
        self.time = time
        self.times = times
        self.states = states
