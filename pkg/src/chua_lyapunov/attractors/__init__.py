"""Self-excited / hidden attractor classification."""

from chua_lyapunov.attractors.classify import (
    classify,
    probe_equilibrium,
    probe_seeds,
    sphere_points,
    unstable_directions,
)
from chua_lyapunov.attractors.models import (
    ClassificationConfig,
    ClassificationVerdict,
    EquilibriumProbeReport,
    ProbeOutcome,
    RadiusProbes,
    VerdictKind,
)

__all__ = [
    "ClassificationConfig",
    "ClassificationVerdict",
    "EquilibriumProbeReport",
    "ProbeOutcome",
    "RadiusProbes",
    "VerdictKind",
    "classify",
    "probe_equilibrium",
    "probe_seeds",
    "sphere_points",
    "unstable_directions",
]
