"""Analytic dimension bounds, exact dimension and convergence certificates."""

from chua_lyapunov.analytic.criteria import (
    analytic_report,
    characteristic_roots,
    corollary1_exact_dimension,
    corollary2_bound,
    dimension_profile,
    equilibrium_dimension,
    equilibrium_dimensions,
    jacobian_nonsingular,
    lemma1_check,
    spectra_over_x,
    symmetrized_spectrum,
    theorem3_search,
    theorem4_convergence,
)
from chua_lyapunov.analytic.models import (
    AnalyticReport,
    CertificateConfig,
    ConvergenceVerdict,
    ConvergenceVerdictKind,
    DimensionCertificate,
    EquilibriumDimension,
    ExactDimension,
    Lemma1Result,
    NonsingularityCheck,
    Premises,
)

__all__ = [
    "AnalyticReport",
    "CertificateConfig",
    "ConvergenceVerdict",
    "ConvergenceVerdictKind",
    "DimensionCertificate",
    "EquilibriumDimension",
    "ExactDimension",
    "Lemma1Result",
    "NonsingularityCheck",
    "Premises",
    "analytic_report",
    "characteristic_roots",
    "corollary1_exact_dimension",
    "corollary2_bound",
    "dimension_profile",
    "equilibrium_dimension",
    "equilibrium_dimensions",
    "jacobian_nonsingular",
    "lemma1_check",
    "spectra_over_x",
    "symmetrized_spectrum",
    "theorem3_search",
    "theorem4_convergence",
]
