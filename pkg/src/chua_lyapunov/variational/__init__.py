"""Trajectory integration and finite-time Lyapunov exponents."""

from chua_lyapunov.variational.exponents import (
    BatchSpectra,
    finite_time_les_benettin,
    finite_time_les_svd,
    fundamental_matrix,
    lyapunov_batch,
    segment_boundaries,
)
from chua_lyapunov.variational.integrator import (
    FlowStepper,
    SegmentResult,
    Trajectory,
    as_system,
    integrate,
    integrate_batch,
)
from chua_lyapunov.variational.models import (
    FiniteTimeSpectrum,
    IntegrationMethod,
    IntegratorConfig,
    LyapunovRoute,
)

__all__ = [
    "BatchSpectra",
    "FiniteTimeSpectrum",
    "FlowStepper",
    "IntegrationMethod",
    "IntegratorConfig",
    "LyapunovRoute",
    "SegmentResult",
    "Trajectory",
    "as_system",
    "finite_time_les_benettin",
    "finite_time_les_svd",
    "fundamental_matrix",
    "integrate",
    "integrate_batch",
    "lyapunov_batch",
    "segment_boundaries",
]
