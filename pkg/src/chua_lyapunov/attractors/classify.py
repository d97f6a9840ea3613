"""Self-excited / hidden attractor classification by equilibrium probing.

An attractor is self-excited when its basin meets every neighbourhood of
some equilibrium. Probes are started on small spheres around each
equilibrium, the unstable eigenvector directions first, then scrambled
Halton points mapped to the sphere. A probe reaches the sampled attractor
when, after the transient, it comes within ``attractor_match_distance`` of
a sample point and stays bounded until ``t_observe``. Only self-excitation
can be certified; the other branch is a hidden candidate.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence

import numpy as np
from numpy.typing import NDArray
from scipy.spatial import cKDTree
from scipy.stats import qmc

from chua_lyapunov.analytic import characteristic_roots, equilibrium_dimension
from chua_lyapunov.attractors.models import (
    ClassificationConfig,
    ClassificationVerdict,
    EquilibriumProbeReport,
    ProbeOutcome,
    RadiusProbes,
    VerdictKind,
)
from chua_lyapunov.errors import EmptySample
from chua_lyapunov.linalg3 import real_eigenvector
from chua_lyapunov.lyapunov import AttractorSample
from chua_lyapunov.model import Equilibrium, Parameters, jacobian
from chua_lyapunov.variational import IntegratorConfig, integrate_batch

logger = logging.getLogger(__name__)


def unstable_directions(p: Parameters, eq: Equilibrium) -> NDArray[np.float64]:
    """Unit eigenvectors of J(u_eq) for its positive real eigenvalues.

    Returns:
        Array of shape (k, 3), largest eigenvalue first; k may be 0.
    """
    jac = jacobian(p, eq.array)
    roots = characteristic_roots(jac)
    positive = sorted((lam for lam in roots.real if lam > 0.0), reverse=True)
    if not positive:
        return np.zeros((0, 3))
    return np.stack([real_eigenvector(jac, lam) for lam in positive])


def sphere_points(n: int, seed: int) -> NDArray[np.float64]:
    """First ``n`` points of a seeded scrambled Halton sequence on the unit sphere.

    The equal-area map z = 1 - 2u, phi = 2 pi v sends the unit square to the
    sphere. Larger ``n`` extends the same prefix.
    """
    if n <= 0:
        return np.zeros((0, 3))
    uv = qmc.Halton(d=2, scramble=True, seed=seed).random(n)
    z = 1.0 - 2.0 * uv[:, 0]
    phi = 2.0 * math.pi * uv[:, 1]
    r = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])


def probe_seeds(
    p: Parameters, eq: Equilibrium, radius: float, cfg: ClassificationConfig
) -> NDArray[np.float64]:
    """Initial points of the probes around ``eq`` on a sphere of ``radius``.

    The +/- unstable eigenvector directions lead, the Halton points fill
    up to ``cfg.probes_per_equilibrium``.
    """
    leading = unstable_directions(p, eq)
    directions = np.stack([leading, -leading], axis=1).reshape(-1, 3)
    n = cfg.probes_per_equilibrium
    if directions.shape[0] < n:
        directions = np.vstack([directions, sphere_points(n - directions.shape[0], cfg.rng_seed)])
    return eq.array + radius * directions[:n]


def _observation_times(cfg: ClassificationConfig) -> NDArray[np.float64]:
    window = cfg.t_observe - cfg.t_transient
    n = max(1, math.ceil(window / cfg.observe_stride - 1e-9))
    tail = cfg.t_transient + np.arange(n + 1, dtype=np.float64) * cfg.observe_stride
    tail[-1] = cfg.t_observe
    return np.concatenate([[0.0], tail])


def _probe_radius(
    p: Parameters,
    eq: Equilibrium,
    radius: float,
    tree: cKDTree,
    cfg: ClassificationConfig,
    integrator: IntegratorConfig,
) -> RadiusProbes:
    seeds = probe_seeds(p, eq, radius, cfg)
    times = _observation_times(cfg)
    states, blow_times = integrate_batch(p, seeds, times, integrator)
    window = states[:, 1:, :]

    outcomes: list[ProbeOutcome] = []
    closest: list[float | None] = []
    matched: tuple[float, float, float] | None = None
    for i, seed in enumerate(seeds):
        if not np.isnan(blow_times[i]):
            outcomes.append(ProbeOutcome.DIVERGED)
            closest.append(None)
            continue
        dist, _ = tree.query(window[i])
        nearest = float(np.min(dist))
        closest.append(nearest)
        if nearest <= cfg.attractor_match_distance:
            outcomes.append(ProbeOutcome.REACHED)
            if matched is None:
                matched = (float(seed[0]), float(seed[1]), float(seed[2]))
        else:
            outcomes.append(ProbeOutcome.OTHER)
    logger.debug(
        "%s r=%g: %d reached, %d diverged of %d",
        eq.label,
        radius,
        outcomes.count(ProbeOutcome.REACHED),
        outcomes.count(ProbeOutcome.DIVERGED),
        len(outcomes),
    )
    return RadiusProbes(radius=radius, outcomes=outcomes, closest=closest, matched_probe=matched)


def probe_equilibrium(
    p: Parameters,
    eq: Equilibrium,
    sample: AttractorSample,
    cfg: ClassificationConfig,
    integrator: IntegratorConfig,
) -> EquilibriumProbeReport:
    """Probe the neighbourhood of one equilibrium at every configured radius.

    Radii are probed largest first and every radius is tried, so adding
    radii or probes never removes a match found with fewer.
    """
    tree = cKDTree(sample.array)
    radii = [_probe_radius(p, eq, radius, tree, cfg, integrator) for radius in cfg.radii]
    return EquilibriumProbeReport(
        label=eq.label,
        point=eq.point,
        unstable_directions=int(unstable_directions(p, eq).shape[0]),
        dimension=equilibrium_dimension(p, eq),
        radii=radii,
        matched=any(r.matched_probe is not None for r in radii),
    )


def classify(
    p: Parameters,
    sample: AttractorSample,
    equilibria: Sequence[Equilibrium],
    cfg: ClassificationConfig,
    integrator: IntegratorConfig | None = None,
) -> ClassificationVerdict:
    """Classify a sampled attractor as self-excited or a hidden candidate.

    Every equilibrium is probed; the verdict names the first one, in the
    given order, whose probes reach the sample. Probe blow-ups are recorded
    as outcomes.

    Args:
        p: Model parameters.
        sample: Attractor sample K.
        equilibria: Equilibria of ``p``, usually from ``model.equilibria``.
        cfg: Probing settings.
        integrator: Integrator settings (defaults when omitted).

    Raises:
        EmptySample: If the sample has no points.
    """
    if len(sample) == 0:
        raise EmptySample("attractor sample is empty")
    integrator = integrator or IntegratorConfig()
    reports = [probe_equilibrium(p, eq, sample, cfg, integrator) for eq in equilibria]
    exciting = next((r.label for r in reports if r.matched), None)
    if exciting is None:
        logger.info("No probe reached the attractor; reporting a hidden candidate")
        return ClassificationVerdict(
            verdict=VerdictKind.HIDDEN_CANDIDATE,
            equilibria=reports,
            caveat=True,
            sample_size=len(sample),
        )
    logger.info("Attractor excited from equilibrium %s", exciting)
    return ClassificationVerdict(
        verdict=VerdictKind.SELF_EXCITED,
        equilibrium=exciting,
        equilibria=reports,
        caveat=False,
        sample_size=len(sample),
    )
