"""Vector field, Jacobian and equilibria of the Chua memristor model.

    x' = alpha*(m0 - 1)*x + alpha*y - alpha*m1*x**3 + alpha*x0
    y' = x - y + z
    z' = beta*y - gamma*z

All functions accept a single state of shape (3,) or a batch of shape
(..., 3) and return arrays of the matching shape.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Protocol

import numpy as np
from numpy.typing import ArrayLike, NDArray

from chua_lyapunov.errors import DegenerateReduction, EquilibriumResidualError
from chua_lyapunov.linalg3 import Matrix3, cubic_roots
from chua_lyapunov.model.models import Equilibrium, Parameters, StateVector, as_state

logger = logging.getLogger(__name__)

DEFAULT_EQUILIBRIUM_TOL = 1e-10
DUPLICATE_RTOL = 1e-9
_NEWTON_ITERATIONS = 3


class SmoothSystem(Protocol):
    """A smooth autonomous vector field on R^3.

    The integrator and the exponent routines only talk to this interface,
    so any 3-D model can be analyzed by implementing it.
    """

    def vector_field(self, u: StateVector) -> StateVector: ...

    def jacobian(self, u: StateVector) -> Matrix3: ...

    def jacobian_action(self, u: StateVector, v: NDArray[np.float64]) -> NDArray[np.float64]: ...

    def divergence(self, u: StateVector) -> NDArray[np.float64]: ...


def vector_field(p: Parameters, u: ArrayLike) -> StateVector:
    """Evaluate the right-hand side of the model at ``u``."""
    s = as_state(u)
    x, y, z = s[..., 0], s[..., 1], s[..., 2]
    a = p.alpha
    dx = a * (p.m0 - 1.0) * x + a * y - a * p.m1 * x**3 + a * p.x0
    dy = x - y + z
    dz = p.beta * y - p.gamma * z
    return np.stack([dx, dy, dz], axis=-1)


def jacobian_at_origin(p: Parameters) -> Matrix3:
    """J(0); the Jacobian at any point with x = 0."""
    return np.array(
        [
            [p.alpha * (p.m0 - 1.0), p.alpha, 0.0],
            [1.0, -1.0, 1.0],
            [0.0, p.beta, -p.gamma],
        ]
    )


def jacobian(p: Parameters, u: ArrayLike) -> Matrix3:
    """Jacobian J(u) = J(0) - 3*alpha*m1*x^2 * e1 e1^T."""
    s = as_state(u)
    j0 = jacobian_at_origin(p)
    out = np.broadcast_to(j0, (*s.shape[:-1], 3, 3)).copy()
    out[..., 0, 0] = j0[0, 0] - 3.0 * p.alpha * p.m1 * s[..., 0] ** 2
    return out


def symmetrized_jacobian(p: Parameters, u: ArrayLike) -> Matrix3:
    """The symmetric part (J(u) + J(u)^T) / 2, exactly symmetric."""
    s = as_state(u)
    off_xy = (p.alpha + 1.0) / 2.0
    off_yz = (1.0 + p.beta) / 2.0
    sym = np.array(
        [
            [p.alpha * (p.m0 - 1.0), off_xy, 0.0],
            [off_xy, -1.0, off_yz],
            [0.0, off_yz, -p.gamma],
        ]
    )
    out = np.broadcast_to(sym, (*s.shape[:-1], 3, 3)).copy()
    out[..., 0, 0] = sym[0, 0] - 3.0 * p.alpha * p.m1 * s[..., 0] ** 2
    return out


def divergence(p: Parameters, u: ArrayLike) -> NDArray[np.float64]:
    """trace J(u) = alpha*(m0 - 1) - 3*alpha*m1*x^2 - 1 - gamma."""
    s = as_state(u)
    return p.alpha * (p.m0 - 1.0) - 3.0 * p.alpha * p.m1 * s[..., 0] ** 2 - 1.0 - p.gamma


@dataclass(frozen=True)
class ChuaMemristor:
    """The Chua memristor model as a ``SmoothSystem``.

    Example:
        ```python
        system = ChuaMemristor(Parameters(alpha=10, beta=-16, gamma=0, m0=7/6, m1=1/16))
        f = system.vector_field(np.zeros(3))
        ```
    """

    params: Parameters

    def vector_field(self, u: StateVector) -> StateVector:
        return vector_field(self.params, u)

    def jacobian(self, u: StateVector) -> Matrix3:
        return jacobian(self.params, u)

    def jacobian_action(self, u: StateVector, v: NDArray[np.float64]) -> NDArray[np.float64]:
        """J(u) @ v for vectors ``(..., 3)`` or tangent frames ``(..., 3, k)``.

        Uses J(u) = J(0) - 3*alpha*m1*x^2 * e1 e1^T, so only the first row
        depends on the state.
        """
        p = self.params
        s = as_state(u)
        j0 = jacobian_at_origin(p)
        correction = 3.0 * p.alpha * p.m1 * s[..., 0] ** 2
        if v.ndim == s.ndim:
            out = v @ j0.T
            out[..., 0] -= correction * v[..., 0]
        else:
            out = j0 @ v
            out[..., 0, :] -= correction[..., None] * v[..., 0, :]
        return out

    def divergence(self, u: StateVector) -> NDArray[np.float64]:
        return divergence(self.params, u)


# ---------------------------------------------------------------------------
# Equilibria
# ---------------------------------------------------------------------------


def _reduced_roots(cubic: float, linear: float, constant: float) -> list[float]:
    """Real roots of ``cubic*x^3 + linear*x + constant = 0``.

    Raises:
        DegenerateReduction: If the equation vanishes identically.
    """
    if constant == 0.0:
        # x = 0 plus the pair +-sqrt(-linear/cubic) when real; exact values.
        roots = [0.0]
        if cubic != 0.0:
            ratio = -linear / cubic
            if ratio > 0.0:
                r = math.sqrt(ratio)
                roots.extend([-r, r])
        elif linear == 0.0:
            raise DegenerateReduction("reduced equilibrium equation vanishes identically")
        return roots
    if cubic != 0.0:
        return list(cubic_roots(cubic, 0.0, linear, constant).real)
    if linear != 0.0:
        return [-constant / linear]
    return []


def _reduce(p: Parameters) -> list[StateVector]:
    if p.alpha == 0.0:
        raise DegenerateReduction("alpha = 0 leaves x unconstrained")
    if p.gamma == 0.0:
        if p.beta == 0.0:
            raise DegenerateReduction("beta = gamma = 0 leaves z unconstrained")
        # z' = beta*y forces y = 0, then y' = 0 gives z = -x.
        xs = _reduced_roots(-p.m1, p.m0 - 1.0, p.x0)
        return [np.array([x, 0.0, -x]) for x in xs]
    if p.beta == p.gamma:
        # y' = 0 with z = y forces x = 0, then x' = 0 gives y = -x0.
        return [np.array([0.0, -p.x0, -p.x0])]
    c = p.gamma / (p.gamma - p.beta)
    xs = _reduced_roots(-p.m1, p.m0 - 1.0 + c, p.x0)
    ratio = p.beta / p.gamma
    return [np.array([x, c * x, ratio * c * x]) for x in xs]


def _newton_polish(p: Parameters, u: StateVector) -> StateVector:
    for _ in range(_NEWTON_ITERATIONS):
        f = vector_field(p, u)
        try:
            step = np.linalg.solve(jacobian(p, u), -f)
        except np.linalg.LinAlgError:
            break
        trial = u + step
        if np.linalg.norm(vector_field(p, trial)) >= np.linalg.norm(f):
            break
        u = trial
    return u


def _same_point(u: StateVector, q: StateVector) -> bool:
    scale = max(1.0, float(np.max(np.abs(u))), float(np.max(np.abs(q))))
    return float(np.max(np.abs(u - q))) <= DUPLICATE_RTOL * scale


def _label(point: StateVector, index: int, symmetric: bool) -> str:
    if symmetric:
        if np.all(point == 0.0):
            return "origin"
        return "plus" if point[0] > 0.0 else "minus"
    return f"generic-{index}"


def equilibria(p: Parameters, tol: float = DEFAULT_EQUILIBRIUM_TOL) -> list[Equilibrium]:
    """All equilibria of the model, sorted ascending by x, then y, then z.

    The equations y' = 0 and z' = 0 are linear, so every equilibrium is
    determined by its x coordinate, which solves a real cubic. Each point is
    Newton-polished in 3-D when its residual exceeds ``tol``. Roots that agree
    to a relative 1e-9 are reported once.

    Args:
        p: Model parameters.
        tol: Residual tolerance on the Euclidean norm of f.

    Returns:
        Equilibria sorted ascending by (x, y, z).

    Raises:
        ValueError: If ``tol`` is not positive.
        DegenerateReduction: If the equilibria form a continuum.
        EquilibriumResidualError: If a point cannot be polished below ``tol``.
    """
    if not tol > 0.0:
        raise ValueError("tol must be positive")

    points: list[StateVector] = []
    for u in _reduce(p):
        residual = float(np.linalg.norm(vector_field(p, u)))
        if residual > tol:
            u = _newton_polish(p, u)
            residual = float(np.linalg.norm(vector_field(p, u)))
            if residual > tol:
                raise EquilibriumResidualError(
                    f"equilibrium at x={u[0]:.6g} has residual {residual:.3e} > {tol:.1e}"
                )
        if not any(_same_point(u, q) for q in points):
            points.append(u)

    points.sort(key=lambda q: (q[0], q[1], q[2]))
    symmetric = p.x0 == 0.0
    result = [
        Equilibrium(
            point=(float(q[0]), float(q[1]), float(q[2])),
            label=_label(q, k, symmetric),
            residual=float(np.linalg.norm(vector_field(p, q))),
        )
        for k, q in enumerate(points, start=1)
    ]
    logger.debug("Found %d equilibria for %s", len(result), p)
    return result
