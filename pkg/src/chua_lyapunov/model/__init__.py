"""Chua memristor model: parameters, vector field, Jacobian and equilibria."""

from chua_lyapunov.model.chua import (
    ChuaMemristor,
    SmoothSystem,
    divergence,
    equilibria,
    jacobian,
    jacobian_at_origin,
    symmetrized_jacobian,
    vector_field,
)
from chua_lyapunov.model.models import (
    PARAMETER_NAMES,
    Equilibrium,
    Parameters,
    StateVector,
    as_state,
)

__all__ = [
    "ChuaMemristor",
    "Equilibrium",
    "PARAMETER_NAMES",
    "Parameters",
    "SmoothSystem",
    "StateVector",
    "as_state",
    "divergence",
    "equilibria",
    "jacobian",
    "jacobian_at_origin",
    "symmetrized_jacobian",
    "vector_field",
]
