"""Exact-size dense 3x3 linear algebra.

Closed-form kernels used throughout the toolkit:

- ``cubic_roots``: trigonometric/Cardano real-cubic solver with Newton polish
- ``sym_eigenvalues``: symmetric eigenvalues from the characteristic cubic
- ``qr_positive``: modified Gram-Schmidt QR with a positive diagonal of R
- ``singular_values``: determinant-consistent singular values

Every kernel accepts stacks of matrices with shape ``(..., 3, 3)`` so that
batched trajectories and parameter grids are handled without Python loops.
The fixed operation count makes results bit-reproducible across runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray

from chua_lyapunov.errors import NotSymmetric, Singular

Matrix3 = NDArray[np.float64]

SYMMETRY_TOLERANCE = 1e-12
# Column norms at or below this are treated as underflowed.
QR_UNDERFLOW = 1e-300
# Spread of the diagonal (relative to the matrix scale) below which the
# symmetric solver returns the triple-root midpoint.
_TRIPLE_ROOT_SPREAD = 1e-14
_TWO_PI_OVER_3 = 2.0 * math.pi / 3.0


# ---------------------------------------------------------------------------
# Spectra
# ---------------------------------------------------------------------------


class SpectrumKind(str, Enum):
    """Provenance tag for an ordered triple of exponents or eigenvalues."""

    JACOBIAN_EIGENVALUES = "jacobian_eigenvalues"
    SYMMETRIZED_EIGENVALUES = "symmetrized_eigenvalues"
    FINITE_TIME_EXPONENTS = "finite_time_exponents"
    SINGULAR_VALUES = "singular_values"


@dataclass(frozen=True)
class Spectrum:
    """Descending triple of real values with a provenance tag."""

    values: tuple[float, float, float]
    kind: SpectrumKind

    def __post_init__(self) -> None:
        v = self.values
        if len(v) != 3:
            raise ValueError(f"spectrum needs three values, got {len(v)}")
        if not (v[0] >= v[1] >= v[2]):
            raise ValueError(f"spectrum values must be descending: {v}")

    def as_array(self) -> NDArray[np.float64]:
        return np.asarray(self.values, dtype=np.float64)


@dataclass(frozen=True)
class SymmetricSpectrum:
    """Eigenvalues of a symmetric 3x3 matrix, descending.

    Attributes:
        lambda1: Largest eigenvalue.
        lambda2: Middle eigenvalue.
        lambda3: Smallest eigenvalue.
    """

    lambda1: float
    lambda2: float
    lambda3: float

    def __post_init__(self) -> None:
        if not (self.lambda1 >= self.lambda2 >= self.lambda3):
            raise ValueError(
                f"eigenvalues must be descending: {(self.lambda1, self.lambda2, self.lambda3)}"
            )

    @property
    def values(self) -> tuple[float, float, float]:
        return (self.lambda1, self.lambda2, self.lambda3)

    @property
    def total(self) -> float:
        return math.fsum(self.values)

    def as_spectrum(self) -> Spectrum:
        return Spectrum(self.values, SpectrumKind.SYMMETRIZED_EIGENVALUES)

    @classmethod
    def from_array(cls, values: ArrayLike) -> SymmetricSpectrum:
        a = np.asarray(values, dtype=np.float64)
        return cls(float(a[0]), float(a[1]), float(a[2]))


# ---------------------------------------------------------------------------
# Real cubic
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CubicRoots:
    """Roots of a real cubic polynomial.

    Attributes:
        real: Distinct real roots, ascending. A double root appears once.
        complex_pair: Conjugate pair (positive imaginary part first) when the
            discriminant is negative, otherwise None.
        discriminant: Discriminant of the monic depressed cubic,
            ``-(4 p^3 + 27 q^2)``; positive means three simple real roots.
        parts: Real parts of all three roots with multiplicity, ascending.
    """

    real: tuple[float, ...]
    complex_pair: tuple[complex, complex] | None
    discriminant: float
    parts: tuple[float, float, float]

    @property
    def all_real(self) -> bool:
        return self.complex_pair is None

    def real_parts(self) -> tuple[float, float, float]:
        """Real parts of the three roots counted with multiplicity, ascending."""
        return self.parts


def _polish(coeffs: tuple[float, float, float], x: float) -> float:
    b, c, d = coeffs
    f = ((x + b) * x + c) * x + d
    df = (3.0 * x + 2.0 * b) * x + c
    if df == 0.0 or not math.isfinite(df):
        return x
    x_new = x - f / df
    f_new = ((x_new + b) * x_new + c) * x_new + d
    return x_new if abs(f_new) < abs(f) else x


def cubic_roots(a: float, b: float, c: float, d: float) -> CubicRoots:
    """Solve ``a x^3 + b x^2 + c x + d = 0`` in closed form.

    Three real roots use the trigonometric solution; one real root uses
    Cardano's formula in its cancellation-free form. Each real root gets one
    Newton polish step on the monic polynomial.

    Raises:
        ValueError: If ``a`` is zero or any coefficient is not finite.
    """
    if a == 0.0:
        raise ValueError("leading coefficient must be nonzero")
    if not all(math.isfinite(v) for v in (a, b, c, d)):
        raise ValueError("cubic coefficients must be finite")

    b_, c_, d_ = b / a, c / a, d / a
    shift = b_ / 3.0
    p = c_ - b_ * b_ / 3.0
    q = 2.0 * b_**3 / 27.0 - b_ * c_ / 3.0 + d_
    disc = -(4.0 * p**3 + 27.0 * q * q)
    spread = max(math.sqrt(abs(p)), abs(q) ** (1.0 / 3.0))
    monic = (b_, c_, d_)

    if spread <= 1e-12 * max(1.0, abs(shift)):
        r = _polish(monic, -shift)
        return CubicRoots((r,), None, disc, (r, r, r))
    if abs(disc) <= 1e-15 * spread**6:
        simple = _polish(monic, 3.0 * q / p - shift)
        double = _polish(monic, -1.5 * q / p - shift)
        parts = sorted((simple, double, double))
    elif disc > 0.0:
        m = 2.0 * math.sqrt(-p / 3.0)
        arg = 3.0 * q / (p * m)
        theta = math.acos(min(1.0, max(-1.0, arg))) / 3.0
        parts = sorted(
            _polish(monic, m * math.cos(theta - k * _TWO_PI_OVER_3) - shift) for k in range(3)
        )
    else:
        half_q = -q / 2.0
        root_d = math.sqrt(q * q / 4.0 + p**3 / 27.0)
        u = float(np.cbrt(half_q + math.copysign(root_d, half_q)))
        v = -p / (3.0 * u) if u != 0.0 else 0.0
        x1 = _polish(monic, u + v - shift)
        e = b_ + x1
        f = c_ + x1 * e
        im = math.sqrt(max(4.0 * f - e * e, 0.0)) / 2.0
        pair = (complex(-e / 2.0, im), complex(-e / 2.0, -im))
        re = -e / 2.0
        ordered = sorted((x1, re, re))
        return CubicRoots((x1,), pair, disc, (ordered[0], ordered[1], ordered[2]))

    return CubicRoots(tuple(sorted(set(parts))), None, disc, (parts[0], parts[1], parts[2]))


# ---------------------------------------------------------------------------
# Small helpers
# ---------------------------------------------------------------------------


def det3(m: ArrayLike) -> NDArray[np.float64] | float:
    """Determinant of one or many 3x3 matrices (LU with partial pivoting)."""
    out = np.linalg.det(np.asarray(m, dtype=np.float64))
    return float(out) if np.ndim(out) == 0 else out


def cofactor(m: ArrayLike) -> Matrix3:
    """Cofactor matrix ``det(m) * inv(m)^T``, computed from row cross products."""
    a = np.asarray(m, dtype=np.float64)
    r0, r1, r2 = a[..., 0, :], a[..., 1, :], a[..., 2, :]
    return np.stack([np.cross(r1, r2), np.cross(r2, r0), np.cross(r0, r1)], axis=-2)


def real_eigenvector(m: ArrayLike, lam: float) -> NDArray[np.float64]:
    """Unit null vector of ``m - lam I`` for a real eigenvalue ``lam``.

    Taken as the largest cross product of two rows; the largest-magnitude
    component is made positive.
    """
    a = np.asarray(m, dtype=np.float64) - lam * np.eye(3)
    candidates = [np.cross(a[0], a[1]), np.cross(a[1], a[2]), np.cross(a[2], a[0])]
    v = max(candidates, key=lambda w: float(np.linalg.norm(w)))
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        # Eigenspace of dimension >= 2; any row-orthogonal vector will do.
        v = np.eye(3)[int(np.argmin(np.abs(a).sum(axis=0)))]
        norm = 1.0
    v = v / norm
    return v if v[int(np.argmax(np.abs(v)))] > 0 else -v


# ---------------------------------------------------------------------------
# Symmetric eigenvalues
# ---------------------------------------------------------------------------


def _check_symmetric(a: NDArray[np.float64]) -> None:
    asym = np.max(np.abs(a - np.swapaxes(a, -1, -2)), initial=0.0)
    scale = max(1.0, float(np.max(np.abs(a), initial=0.0)))
    if not asym <= SYMMETRY_TOLERANCE * scale:
        raise NotSymmetric(f"matrix asymmetry {asym:.3e} exceeds tolerance")


def _shifted_det(a: NDArray[np.float64], lam: NDArray[np.float64]) -> tuple[Any, Any]:
    """det(a - lam I) and its derivative in lam, for symmetric stacks."""
    d0 = a[..., 0, 0] - lam
    d1 = a[..., 1, 1] - lam
    d2 = a[..., 2, 2] - lam
    a01, a02, a12 = a[..., 0, 1], a[..., 0, 2], a[..., 1, 2]
    det = d0 * (d1 * d2 - a12 * a12) - a01 * (a01 * d2 - a12 * a02) + a02 * (a01 * a12 - d1 * a02)
    minors = (d1 * d2 - a12 * a12) + (d0 * d2 - a02 * a02) + (d0 * d1 - a01 * a01)
    return det, -minors


def sym_eigenvalues_array(m: ArrayLike, check: bool = True) -> NDArray[np.float64]:
    """Descending eigenvalues of symmetric 3x3 matrices, shape ``(..., 3)``.

    Args:
        m: Symmetric matrix or stack of matrices.
        check: Verify symmetry before solving.

    Raises:
        NotSymmetric: If ``check`` and the asymmetry exceeds tolerance.
    """
    a = np.asarray(m, dtype=np.float64)
    if check:
        _check_symmetric(a)
    a = 0.5 * (a + np.swapaxes(a, -1, -2))

    q = np.trace(a, axis1=-2, axis2=-1) / 3.0
    p1 = a[..., 0, 1] ** 2 + a[..., 0, 2] ** 2 + a[..., 1, 2] ** 2
    p2 = (
        (a[..., 0, 0] - q) ** 2 + (a[..., 1, 1] - q) ** 2 + (a[..., 2, 2] - q) ** 2 + 2.0 * p1
    )
    p = np.sqrt(p2 / 6.0)
    scale = np.maximum(np.abs(q), p)
    triple = p <= _TRIPLE_ROOT_SPREAD * np.where(scale > 0, scale, 1.0)
    safe_p = np.where(triple, 1.0, p)

    b = (a - q[..., None, None] * np.eye(3)) / safe_p[..., None, None]
    r = np.clip(np.linalg.det(b) / 2.0, -1.0, 1.0)
    phi = np.arccos(r) / 3.0
    e1 = q + 2.0 * p * np.cos(phi)
    e3 = q + 2.0 * p * np.cos(phi + _TWO_PI_OVER_3)
    e2 = 3.0 * q - e1 - e3
    eig = np.stack([e1, e2, e3], axis=-1)

    # One Newton step per root on det(a - lam I); kept only where it helps.
    with np.errstate(divide="ignore", invalid="ignore"):
        f, df = _shifted_det(a[..., None, :, :], eig)
        step = np.where(df != 0.0, f / df, 0.0)
        trial = eig - step
        f_trial, _ = _shifted_det(a[..., None, :, :], trial)
    better = np.isfinite(trial) & (np.abs(f_trial) < np.abs(f))
    eig = np.where(better & ~triple[..., None], trial, eig)
    eig = np.where(triple[..., None], q[..., None], eig)
    return -np.sort(-eig, axis=-1)


def sym_eigenvalues(m: ArrayLike) -> SymmetricSpectrum:
    """Eigenvalues of a symmetric 3x3 matrix, descending.

    Raises:
        NotSymmetric: If the relative asymmetry exceeds 1e-12.
    """
    a = np.asarray(m, dtype=np.float64)
    if a.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {a.shape}")
    return SymmetricSpectrum.from_array(sym_eigenvalues_array(a))


# ---------------------------------------------------------------------------
# QR
# ---------------------------------------------------------------------------


def qr_positive(m: ArrayLike) -> tuple[Matrix3, Matrix3]:
    """QR factorization by modified Gram-Schmidt with one reorthogonalization.

    The diagonal of R is strictly positive, so the factorization is unique.
    Accepts a single matrix or a stack ``(..., 3, 3)``.

    Raises:
        Singular: If a column norm underflows after orthogonalization.
    """
    a = np.asarray(m, dtype=np.float64)
    q = np.zeros_like(a)
    r = np.zeros_like(a)
    for j in range(3):
        v = a[..., :, j].copy()
        for _ in range(2):
            for i in range(j):
                coef = np.sum(q[..., :, i] * v, axis=-1)
                r[..., i, j] += coef
                v -= coef[..., None] * q[..., :, i]
        norm = np.sqrt(np.sum(v * v, axis=-1))
        if not np.all(norm > QR_UNDERFLOW):
            raise Singular(f"column {j} norm underflowed during QR")
        r[..., j, j] = norm
        q[..., :, j] = v / norm[..., None]
    return q, r


# ---------------------------------------------------------------------------
# Singular values
# ---------------------------------------------------------------------------


def _top_eigenvalue_of_gram(a: NDArray[np.float64]) -> NDArray[np.float64]:
    gram = np.swapaxes(a, -1, -2) @ a
    gram = 0.5 * (gram + np.swapaxes(gram, -1, -2))
    return np.maximum(sym_eigenvalues_array(gram, check=False)[..., 0], 0.0)


def graded_log_singular_values(
    log_scale: ArrayLike, w: ArrayLike, log_abs_det_w: ArrayLike | None = None
) -> NDArray[np.float64]:
    """Log singular values of ``diag(exp(log_scale)) @ w``, descending.

    The product is never formed, so scales far outside the floating-point
    range are handled. ``s1`` comes from the Gram matrix of the row-normalized
    product, ``s1*s2`` from the Gram matrix of its cofactor matrix, and ``s3``
    from the determinant, which makes ``sum(log s) == log|det|`` by
    construction.

    Args:
        log_scale: Row log-scales, shape ``(..., 3)``.
        w: Matrices, shape ``(..., 3, 3)``.
        log_abs_det_w: ``log|det w|`` if already known (0 for unit triangular).
    """
    ls = np.asarray(log_scale, dtype=np.float64)
    wm = np.asarray(w, dtype=np.float64)
    if log_abs_det_w is None:
        _, log_abs_det_w = np.linalg.slogdet(wm)
    log_det = np.sum(ls, axis=-1) + np.asarray(log_abs_det_w, dtype=np.float64)

    with np.errstate(divide="ignore"):
        top = np.max(ls, axis=-1)
        a = np.exp(ls - top[..., None])[..., :, None] * wm
        log_s1 = top + 0.5 * np.log(_top_eigenvalue_of_gram(a))

        cof_scale = np.sum(ls, axis=-1)[..., None] - ls
        ctop = np.max(cof_scale, axis=-1)
        c = np.exp(cof_scale - ctop[..., None])[..., :, None] * cofactor(wm)
        log_s12 = ctop + 0.5 * np.log(_top_eigenvalue_of_gram(c))

    with np.errstate(invalid="ignore"):
        log_s2 = np.where(np.isfinite(log_s12), log_s12 - log_s1, -np.inf)
        log_s3 = np.where(np.isfinite(log_det), log_det - log_s12, -np.inf)
    out = np.stack([log_s1, log_s2, log_s3], axis=-1)
    return -np.sort(-out, axis=-1)


def log_singular_values(m: ArrayLike) -> NDArray[np.float64]:
    """Log singular values of one or many 3x3 matrices, descending."""
    a = np.asarray(m, dtype=np.float64)
    return graded_log_singular_values(np.zeros(a.shape[:-1]), a)


def singular_values(m: ArrayLike) -> Spectrum:
    """Singular values of a 3x3 matrix, descending and nonnegative.

    ``sigma1 * sigma2 * sigma3 == |det m|`` holds up to a few roundings.
    """
    a = np.asarray(m, dtype=np.float64)
    if a.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    values = np.exp(log_singular_values(a))
    return Spectrum(
        (float(values[0]), float(values[1]), float(values[2])), SpectrumKind.SINGULAR_VALUES
    )
