"""Eigenvalue-based dimension bounds and convergence certificates.

J(u) = J(0) - 3*alpha*m1*x^2 * e1 e1^T, so for alpha*m1 > 0 the symmetrized
Jacobian at u is the one at the origin minus a positive semidefinite rank-1
term. Its ordered eigenvalues are then dominated by those at the origin,
which reduces every supremum over the phase space to a value at x = 0. For a
general constant S the reduction is unavailable and suprema are taken over a
finite x grid (the symmetrized matrix depends on u only through x).
"""

from __future__ import annotations

import logging
import math

import numpy as np
from numpy.typing import ArrayLike, NDArray

from chua_lyapunov.analytic.models import (
    S_DETERMINANT_FLOOR,
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
from chua_lyapunov.errors import (
    AssumptionViolated,
    DegenerateReduction,
    NoCertificate,
    SingularS,
)
from chua_lyapunov.linalg3 import (
    CubicRoots,
    SymmetricSpectrum,
    cubic_roots,
    sym_eigenvalues,
    sym_eigenvalues_array,
)
from chua_lyapunov.lyapunov import entropy_upper_bound, kaplan_yorke
from chua_lyapunov.model import (
    Equilibrium,
    Parameters,
    as_state,
    equilibria,
    jacobian,
    jacobian_at_origin,
    symmetrized_jacobian,
)

logger = logging.getLogger(__name__)

DOMINATION_SLACK = 1e-12
SEPARATION_TOL = 1e-9
_BISECTION_STEPS = 40


def _require_estimates(p: Parameters) -> None:
    if not p.estimates_applicable:
        raise AssumptionViolated(f"alpha*m1 = {p.alpha * p.m1:.6g} must be positive")


def _check_s(s: ArrayLike) -> NDArray[np.float64]:
    arr = np.asarray(s, dtype=np.float64)
    if arr.shape != (3, 3) or not np.all(np.isfinite(arr)):
        raise SingularS("S must be a finite 3x3 matrix")
    if abs(np.linalg.det(arr)) <= S_DETERMINANT_FLOOR:
        raise SingularS("S is singular (|det S| <= 1e-12)")
    return arr


def _similar_symmetrized(jac: NDArray[np.float64], s: NDArray[np.float64]) -> NDArray[np.float64]:
    m = s @ jac @ np.linalg.inv(s)
    return 0.5 * (m + np.swapaxes(m, -1, -2))


def symmetrized_spectrum(
    p: Parameters, u: ArrayLike, S: ArrayLike | None = None
) -> SymmetricSpectrum:
    """Eigenvalues of ``(S J(u) S^-1 + (S J(u) S^-1)^T) / 2``, descending.

    Raises:
        SingularS: If S is singular or not finite.
    """
    if S is None:
        return sym_eigenvalues(symmetrized_jacobian(p, as_state(u).reshape(3)))
    s = _check_s(S)
    return sym_eigenvalues(_similar_symmetrized(jacobian(p, as_state(u).reshape(3)), s))


def spectra_over_x(p: Parameters, xs: ArrayLike, S: ArrayLike | None = None) -> NDArray[np.float64]:
    """Symmetrized spectra at the points (x, 0, 0), shape (n, 3), descending."""
    grid = np.asarray(xs, dtype=np.float64)
    points = np.zeros((grid.size, 3))
    points[:, 0] = grid
    if S is None:
        return sym_eigenvalues_array(symmetrized_jacobian(p, points), check=False)
    s = _check_s(S)
    return sym_eigenvalues_array(_similar_symmetrized(jacobian(p, points), s), check=False)


def _cert_s(cert: CertificateConfig) -> NDArray[np.float64] | None:
    return None if cert.is_identity else cert.s_matrix


def lemma1_check(p: Parameters, u_samples: ArrayLike) -> Lemma1Result:
    """Check lambda_j(u) <= lambda_j(0) at every sample point.

    The slack is 1e-12 relative to the magnitude of the spectra compared.

    Raises:
        AssumptionViolated: If alpha*m1 <= 0.
        ValueError: If no samples are given.
    """
    _require_estimates(p)
    points = np.atleast_2d(as_state(u_samples))
    if points.shape[0] == 0:
        raise ValueError("at least one sample is required")
    lam0 = np.asarray(symmetrized_spectrum(p, np.zeros(3)).values)
    lam_u = sym_eigenvalues_array(symmetrized_jacobian(p, points), check=False)
    margins = lam0[None, :] - lam_u
    scale = np.maximum(1.0, np.maximum(np.max(np.abs(lam0)), np.max(np.abs(lam_u), axis=1)))
    holds = bool(np.all(margins >= -DOMINATION_SLACK * scale[:, None]))
    return Lemma1Result(
        holds=holds, worst_margin=float(np.min(margins)), samples=int(points.shape[0])
    )


def dimension_profile(
    p: Parameters, cert: CertificateConfig
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Kaplan-Yorke value of the symmetrized spectrum along the x grid."""
    xs = cert.x_grid()
    spectra = spectra_over_x(p, xs, _cert_s(cert))
    return xs, np.asarray([kaplan_yorke(row) for row in spectra])


def corollary2_bound(p: Parameters, cert: CertificateConfig | None = None) -> float:
    """Upper bound of the Lyapunov dimension from symmetrized eigenvalues.

    With S = I the supremum over the phase space is attained at x = 0 and
    the bound is the Kaplan-Yorke value of lambda(0). For a general S the
    bound is the maximum over the x grid.

    Raises:
        AssumptionViolated: If alpha*m1 <= 0.
    """
    _require_estimates(p)
    cert = cert or CertificateConfig()
    if cert.is_identity:
        return kaplan_yorke(symmetrized_spectrum(p, np.zeros(3)).values)
    _, dims = dimension_profile(p, cert)
    return float(np.max(dims))


def characteristic_roots(m: ArrayLike) -> CubicRoots:
    """Roots of det(lambda I - m) = 0 for a 3x3 matrix."""
    a = np.asarray(m, dtype=np.float64)
    trace = float(np.trace(a))
    minors = float(
        a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
        + a[0, 0] * a[2, 2] - a[0, 2] * a[2, 0]
        + a[1, 1] * a[2, 2] - a[1, 2] * a[2, 1]
    )
    det = float(np.linalg.det(a))
    return cubic_roots(1.0, -trace, minors, -det)


def _real_parts_desc(roots: CubicRoots) -> tuple[float, float, float]:
    low, mid, high = roots.real_parts()
    return (high, mid, low)


def _is_real_simple(roots: CubicRoots) -> bool:
    if not roots.all_real or len(roots.real) < 3 or roots.discriminant <= 0.0:
        return False
    vals = sorted(roots.real)
    scale = 1.0 + max(abs(v) for v in vals)
    return min(b - a for a, b in zip(vals, vals[1:])) > SEPARATION_TOL * scale


def corollary1_exact_dimension(p: Parameters) -> ExactDimension:
    """Exact Lyapunov dimension from eig J(0) when they are real and simple.

    ``value`` is None when the premise fails; the Kaplan-Yorke value of the
    symmetrized spectrum is reported alongside in either case.
    """
    roots = characteristic_roots(jacobian_at_origin(p))
    real_parts = _real_parts_desc(roots)
    simple = _is_real_simple(roots)
    sym_value = kaplan_yorke(symmetrized_spectrum(p, np.zeros(3)).values)
    if not simple:
        logger.info("eig J(0) not real and simple; no exact dimension for %s", p)
    return ExactDimension(
        value=kaplan_yorke(real_parts) if simple else None,
        real_simple=simple,
        eigenvalues=real_parts,
        discriminant=roots.discriminant,
        symmetrized_value=sym_value,
    )


def _s_values(step: float) -> NDArray[np.float64]:
    n = int(math.floor(1.0 / step + 1e-9))
    values = np.arange(n + 1, dtype=np.float64) * step
    if values[-1] < 1.0:
        values = np.append(values, 1.0)
    return np.minimum(values, 1.0)


def theorem3_search(p: Parameters, cert: CertificateConfig | None = None) -> DimensionCertificate:
    """Smallest j + s with sup_x (lambda1 + ... + lambda_j + s*lambda_(j+1)) < 0.

    j ranges over {1, 2} and s over a uniform grid on [0, 1]; the reported
    bound is the grid value and ``s_refined`` bisects the feasibility edge.

    Raises:
        SingularS: If S is singular.
        NoCertificate: If no (j, s) on the grid satisfies the criterion.
    """
    cert = cert or CertificateConfig()
    s_mat = _cert_s(cert)
    spectra = spectra_over_x(p, cert.x_grid(), s_mat)
    s_values = _s_values(cert.s_grid)
    interval = (cert.x_min, cert.x_max)

    for j in (1, 2):
        base = spectra[:, :j].sum(axis=1)
        nxt = spectra[:, j]
        sup = np.max(base[None, :] + s_values[:, None] * nxt[None, :], axis=1)
        feasible = np.flatnonzero(sup < 0.0)
        if feasible.size == 0:
            continue
        k = int(feasible[0])
        s_refined = float(s_values[k])
        if k > 0:
            lo, hi = float(s_values[k - 1]), float(s_values[k])
            for _ in range(_BISECTION_STEPS):
                mid = 0.5 * (lo + hi)
                if np.max(base + mid * nxt) < 0.0:
                    hi = mid
                else:
                    lo = mid
            s_refined = hi
        s = float(s_values[k])
        return DimensionCertificate(
            j=j,
            s=s,
            bound=j + s,
            s_refined=s_refined,
            grid_supremum=float(sup[k]),
            x_interval=interval,
        )
    raise NoCertificate(f"no (j, s) with j in {{1, 2}} satisfies the criterion for {p}")


def theorem4_convergence(
    p: Parameters, cert: CertificateConfig | None = None
) -> ConvergenceVerdict:
    """Global convergence certificate: sup (lambda1 + lambda2) < 0.

    With S = I the supremum is lambda1(0) + lambda2(0), which requires
    alpha*m1 > 0. A general S uses the grid supremum over x.

    Raises:
        AssumptionViolated: If S = I and alpha*m1 <= 0.
        SingularS: If S is singular.
    """
    cert = cert or CertificateConfig()
    if cert.is_identity:
        _require_estimates(p)
        lam = symmetrized_spectrum(p, np.zeros(3))
        sup = lam.lambda1 + lam.lambda2
        reduction = "exact-at-origin"
        interval = None
    else:
        spectra = spectra_over_x(p, cert.x_grid(), cert.s_matrix)
        sup = float(np.max(spectra[:, 0] + spectra[:, 1]))
        reduction = "grid"
        interval = (cert.x_min, cert.x_max)
    verdict = ConvergenceVerdictKind.CONVERGES if sup < 0.0 else ConvergenceVerdictKind.INCONCLUSIVE
    return ConvergenceVerdict(
        verdict=verdict,
        margin=-sup,
        supremum=sup,
        reduction=reduction,  # type: ignore[arg-type]
        x_interval=interval,
    )


def jacobian_nonsingular(p: Parameters) -> NonsingularityCheck:
    """Check det J(u) != 0 for all u.

    det J(u) = a11*(gamma - beta) + alpha*gamma with
    a11 = alpha*(m0 - 1) - 3*alpha*m1*x^2, so it vanishes on at most one
    value of |x|.
    """
    det0 = float(np.linalg.det(jacobian_at_origin(p)))
    slope = -3.0 * p.alpha * p.m1 * (p.gamma - p.beta)
    if slope == 0.0:
        return NonsingularityCheck(holds=det0 != 0.0, det_at_origin=det0)
    x_sq = -det0 / slope
    if x_sq < 0.0:
        return NonsingularityCheck(holds=True, det_at_origin=det0)
    return NonsingularityCheck(holds=False, critical_abs_x=math.sqrt(x_sq), det_at_origin=det0)


def equilibrium_dimension(p: Parameters, eq: Equilibrium) -> EquilibriumDimension:
    """Local Lyapunov dimension at one equilibrium.

    The finite-time local dimension at an equilibrium tends to the
    Kaplan-Yorke value of the real parts of eig J(u_eq).
    """
    roots = characteristic_roots(jacobian(p, eq.array))
    parts = _real_parts_desc(roots)
    return EquilibriumDimension(
        label=eq.label,
        point=eq.point,
        real_parts=parts,
        all_real=roots.all_real,
        local_dimension=kaplan_yorke(parts),
        unstable=parts[0] > 0.0,
    )


def equilibrium_dimensions(p: Parameters) -> list[EquilibriumDimension]:
    """Local Lyapunov dimension at every equilibrium.

    Raises:
        DegenerateReduction: If the equilibria form a continuum.
    """
    return [equilibrium_dimension(p, eq) for eq in equilibria(p)]


def analytic_report(p: Parameters, cert: CertificateConfig | None = None) -> AnalyticReport:
    """Every analytic result for ``p`` in one report.

    Criteria whose hypotheses fail are omitted (None) rather than raised;
    the premise flags say which hypotheses held.
    """
    cert = cert or CertificateConfig()
    lam0 = symmetrized_spectrum(p, np.zeros(3))
    exact = corollary1_exact_dimension(p)
    nonsingular = jacobian_nonsingular(p)

    certificate: DimensionCertificate | None
    try:
        certificate = theorem3_search(p, cert)
    except NoCertificate:
        certificate = None

    if p.estimates_applicable:
        bound = corollary2_bound(p, cert)
        source = "corollary2"
        xs = cert.x_grid()
        lemma1: Lemma1Result | None = lemma1_check(
            p, np.column_stack([xs, np.zeros((xs.size, 2))])
        )
    elif certificate is not None:
        bound, source, lemma1 = certificate.bound, "theorem3-grid", None
    else:
        bound, source, lemma1 = 3.0, "trivial", None

    convergence: ConvergenceVerdict | None
    try:
        convergence = theorem4_convergence(p, cert)
    except AssumptionViolated:
        convergence = None

    try:
        eq_dims = equilibrium_dimensions(p)
    except DegenerateReduction:
        logger.warning("Equilibria form a continuum; skipping equilibrium dimensions")
        eq_dims = []

    sym_vals = np.asarray(lam0.values)
    premises = Premises(
        estimates_applicable=p.estimates_applicable,
        jacobian_real_simple=exact.real_simple,
        lambda12_negative=lam0.lambda1 + lam0.lambda2 < 0.0,
        jacobian_nonsingular=nonsingular.holds,
        x0_zero=p.x0 == 0.0,
        gamma_zero=p.gamma == 0.0,
        s_identity=cert.is_identity,
        symmetrized_matches_jacobian=bool(
            np.allclose(sym_vals, np.asarray(exact.eigenvalues), rtol=0.0, atol=SEPARATION_TOL)
        ),
    )
    return AnalyticReport(
        parameters=p,
        lambda0=lam0.values,
        exact_dim=exact.value,
        exact=exact,
        bound_dim=min(3.0, max(0.0, bound)),
        bound_source=source,  # type: ignore[arg-type]
        certificate=certificate,
        convergence=convergence,
        entropy_bound=entropy_upper_bound(lam0),
        lemma1=lemma1,
        nonsingularity=nonsingular,
        equilibria=eq_dims,
        premises=premises,
    )
