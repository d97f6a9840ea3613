"""Kaplan-Yorke formula and finite-time Lyapunov dimensions.

The local dimension at u0 is the Kaplan-Yorke value of the finite-time
exponents at u0; the set dimension is its maximum over a sample of K; the
limit dimension is approximated by the infimum over a ladder of horizons.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Sequence

import numpy as np
from numpy.typing import ArrayLike

from chua_lyapunov.errors import EmptySample
from chua_lyapunov.linalg3 import Spectrum, SymmetricSpectrum
from chua_lyapunov.lyapunov.models import (
    AttractorSample,
    DimensionReport,
    LadderRung,
    OrderedExponents,
    PointDimension,
    SeedFailure,
)
from chua_lyapunov.model import Parameters, SmoothSystem, as_state
from chua_lyapunov.variational import (
    BatchSpectra,
    FiniteTimeSpectrum,
    IntegratorConfig,
    lyapunov_batch,
)

logger = logging.getLogger(__name__)


def _triple(v: ArrayLike) -> tuple[float, float, float]:
    a = np.asarray(v, dtype=np.float64)
    return (float(a[0]), float(a[1]), float(a[2]))


def kaplan_yorke(e: OrderedExponents | Iterable[float]) -> float:
    """Kaplan-Yorke dimension of an exponent set.

    ``d = j + (l1 + ... + lj) / |l(j+1)|`` with ``j`` the largest m whose
    partial sum is nonnegative; 0 when j = 0 and 3 when j = 3. Partial sums
    are compensated and the input is re-sorted descending.

    Raises:
        ValueError: If an exponent is not finite or there are not three.
    """
    raw = e.values if isinstance(e, OrderedExponents) else tuple(float(v) for v in e)
    if len(raw) != 3:
        raise ValueError(f"expected three exponents, got {len(raw)}")
    if not all(math.isfinite(v) for v in raw):
        raise ValueError(f"exponents must be finite: {raw}")
    values = sorted(raw, reverse=True)

    j = 0
    for m in range(1, 4):
        if math.fsum(values[:m]) >= 0.0:
            j = m
    if j == 0:
        return 0.0
    if j == 3:
        return 3.0
    return j + math.fsum(values[:j]) / abs(values[j])


def entropy_upper_bound(
    spectrum: FiniteTimeSpectrum | SymmetricSpectrum | Spectrum | Sequence[float],
) -> float:
    """Sum of the positive entries of a spectrum.

    Fed with the symmetrized spectrum at the origin this bounds the sum of
    positive Lyapunov exponents (and the topological entropy) on the whole
    phase space when alpha*m1 > 0.
    """
    if isinstance(spectrum, FiniteTimeSpectrum):
        values: Iterable[float] = spectrum.les
    elif isinstance(spectrum, (SymmetricSpectrum, Spectrum)):
        values = spectrum.values
    else:
        values = spectrum
    return math.fsum(max(float(v), 0.0) for v in values)


def local_dimension(
    model: Parameters | SmoothSystem, u0: ArrayLike, t: float, cfg: IntegratorConfig
) -> float:
    """Finite-time local Lyapunov dimension at ``u0``.

    Raises:
        ValueError: If ``t`` is not positive.
        BlowUp: If the trajectory diverges.
    """
    if not t > 0.0:
        raise ValueError("t must be positive")
    batch = lyapunov_batch(model, as_state(u0).reshape(1, 3), [t], cfg)
    return kaplan_yorke(batch.spectrum(0, 0).les)


def _excluded(batch: BatchSpectra, h: int) -> list[SeedFailure]:
    horizon = batch.horizons[h]
    return [
        SeedFailure(point=_triple(batch.u0[i]), time=float(bt))
        for i, bt in enumerate(batch.blow_times)
        if not np.isnan(bt) and bt <= horizon
    ]


def _point_dimensions(batch: BatchSpectra, h: int) -> list[PointDimension]:
    out: list[PointDimension] = []
    for i in range(batch.u0.shape[0]):
        les = batch.les[h, i]
        if not np.all(np.isfinite(les)):
            continue
        out.append(
            PointDimension(point=_triple(batch.u0[i]), les=_triple(les), dim=kaplan_yorke(les))
        )
    return out


def _report(batch: BatchSpectra, h: int) -> DimensionReport:
    points = _point_dimensions(batch, h)
    if not points:
        raise EmptySample(f"every sample point blew up before t={batch.horizons[h]:.6g}")
    return DimensionReport(
        horizon=float(batch.horizons[h]),
        points=points,
        max=max(p.dim for p in points),
        excluded=_excluded(batch, h),
    )


def set_dimension(
    model: Parameters | SmoothSystem,
    sample: AttractorSample,
    t: float,
    cfg: IntegratorConfig,
) -> DimensionReport:
    """Finite-time Lyapunov dimension of a sampled set at horizon ``t``.

    Every sample point is integrated in one batch; points that blow up are
    reported in ``excluded``.

    Raises:
        ValueError: If ``t`` is not positive.
        EmptySample: If every point blows up.
    """
    if not t > 0.0:
        raise ValueError("t must be positive")
    logger.info("Computing local dimensions at %d points, t=%g", len(sample), t)
    batch = lyapunov_batch(model, sample.array, [t], cfg)
    return _report(batch, 0)


def _check_horizons(horizons: Sequence[float]) -> list[float]:
    hs = [float(h) for h in horizons]
    if not hs:
        raise ValueError("at least one horizon is required")
    if any(h <= 0.0 for h in hs):
        raise ValueError("horizons must be positive")
    if any(b < a for a, b in zip(hs, hs[1:])):
        raise ValueError("horizons must be ascending")
    return hs


def _rungs(batch: BatchSpectra, hs: list[float]) -> list[LadderRung]:
    values: list[float] = []
    for t in hs:
        points = _point_dimensions(batch, batch.horizon_index(t))
        if not points:
            raise EmptySample(f"every sample point blew up before t={t:.6g}")
        values.append(max(p.dim for p in points))
    rungs: list[LadderRung] = []
    tail = math.inf
    for t, v in reversed(list(zip(hs, values))):
        tail = min(tail, v)
        rungs.append(LadderRung(t=t, set_dimension=v, tail_minimum=tail))
    rungs.reverse()
    return rungs


def dimension_ladder(
    model: Parameters | SmoothSystem,
    sample: AttractorSample,
    horizons: Sequence[float],
    cfg: IntegratorConfig,
) -> list[LadderRung]:
    """Set dimension at each horizon of an ascending ladder.

    All rungs come from one Benettin pass with a renormalization forced at
    every horizon. Each rung carries the minimum over itself and the later
    rungs.

    Raises:
        ValueError: If horizons are empty, not positive or not ascending.
        EmptySample: If every point blows up before some horizon.
    """
    hs = _check_horizons(horizons)
    batch = lyapunov_batch(model, sample.array, hs, cfg)
    return _rungs(batch, hs)


def liminf_proxy(rungs: Sequence[LadderRung]) -> float:
    """Infimum of the set dimension over a ladder.

    The finite-time set dimension has equal infimum and lower limit over
    t, so the smallest rung is the proxy for the limit dimension.
    """
    if not rungs:
        raise ValueError("empty ladder")
    return min(r.set_dimension for r in rungs)


def dimension_report(
    model: Parameters | SmoothSystem,
    sample: AttractorSample,
    horizons: Sequence[float],
    cfg: IntegratorConfig,
    analytic_bound: float | None = None,
) -> DimensionReport:
    """Per-point distribution at the largest horizon plus the full ladder.

    Raises:
        ValueError: For invalid horizons.
        EmptySample: If every point blows up.
    """
    hs = _check_horizons(horizons)
    logger.info("Dimension ladder over %d points, horizons %s", len(sample), hs)
    batch = lyapunov_batch(model, sample.array, hs, cfg)
    rungs = _rungs(batch, hs)
    report = _report(batch, batch.horizon_index(hs[-1]))
    return report.model_copy(
        update={
            "ladder": rungs,
            "liminf_proxy": liminf_proxy(rungs),
            "analytic_bound": analytic_bound,
        }
    )
