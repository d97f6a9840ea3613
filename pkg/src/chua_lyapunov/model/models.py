"""Data models for the Chua memristor model.

This module defines Pydantic models for the model constants and the
equilibria of the vector field, plus the array alias used for states.
"""

from __future__ import annotations

import re

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, Field, FiniteFloat, field_validator

StateVector = NDArray[np.float64]

PARAMETER_NAMES: tuple[str, ...] = ("alpha", "beta", "gamma", "m0", "m1", "x0")

_LABEL_PATTERN = re.compile(r"^(origin|plus|minus|generic-[1-9][0-9]*)$")


def as_state(u: ArrayLike) -> StateVector:
    """Convert ``u`` to a float array whose last axis has length 3.

    Raises:
        ValueError: If the trailing dimension is not 3.
    """
    arr = np.asarray(u, dtype=np.float64)
    if arr.ndim == 0 or arr.shape[-1] != 3:
        raise ValueError(f"state must have a trailing axis of length 3, got shape {arr.shape}")
    return arr


class Parameters(BaseModel):
    """The six constants of the Chua memristor model.

    Parameters are deliberately unconstrained beyond finiteness; operations
    that rely on ``alpha * m1 > 0`` check ``estimates_applicable`` themselves.

    Attributes:
        alpha: Gain of the x equation.
        beta: Coupling of y into the z equation.
        gamma: Damping of the z equation.
        m0: Linear memristance coefficient.
        m1: Cubic memristance coefficient.
        x0: Constant offset of the x equation.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    alpha: FiniteFloat = Field(..., description="Gain of the x equation")
    beta: FiniteFloat = Field(..., description="Coupling of y into the z equation")
    gamma: FiniteFloat = Field(..., description="Damping of the z equation")
    m0: FiniteFloat = Field(..., description="Linear memristance coefficient")
    m1: FiniteFloat = Field(..., description="Cubic memristance coefficient")
    x0: FiniteFloat = Field(default=0.0, description="Constant offset of the x equation")

    @property
    def estimates_applicable(self) -> bool:
        """True iff ``alpha * m1 > 0``, the hypothesis of the analytic estimates."""
        return self.alpha * self.m1 > 0.0

    def replace(self, **changes: float) -> Parameters:
        """Return a validated copy with some fields changed."""
        return Parameters.model_validate({**self.model_dump(), **changes})

    def as_tuple(self) -> tuple[float, float, float, float, float, float]:
        return (self.alpha, self.beta, self.gamma, self.m0, self.m1, self.x0)


class Equilibrium(BaseModel):
    """A zero of the vector field.

    Attributes:
        point: Coordinates (x, y, z).
        label: ``origin``, ``plus``, ``minus`` (symmetric case x0 = 0) or
            ``generic-k`` with k the 1-based position in the sorted list.
        residual: Euclidean norm of the vector field at ``point``.
    """

    model_config = ConfigDict(frozen=True)

    point: tuple[float, float, float] = Field(..., description="Equilibrium coordinates")
    label: str = Field(..., description="origin, plus, minus or generic-k")
    residual: float = Field(default=0.0, ge=0.0, description="Norm of f at the point")

    @field_validator("point")
    @classmethod
    def _check_point(cls, value: tuple[float, float, float]) -> tuple[float, float, float]:
        if not all(np.isfinite(value)):
            raise ValueError("equilibrium coordinates must be finite")
        return value

    @field_validator("label")
    @classmethod
    def _check_label(cls, value: str) -> str:
        if not _LABEL_PATTERN.match(value):
            raise ValueError(f"invalid equilibrium label: {value!r}")
        return value

    @property
    def array(self) -> StateVector:
        return np.asarray(self.point, dtype=np.float64)
