"""Data models for self-excited / hidden attractor classification."""

from __future__ import annotations

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from chua_lyapunov.analytic.models import EquilibriumDimension

Triple = tuple[float, float, float]


class ClassificationConfig(BaseModel):
    """Settings for equilibrium-neighbourhood probing.

    Attributes:
        ball_radius: Radius of the probe sphere around each equilibrium.
        probes_per_equilibrium: Probes per equilibrium and radius.
        t_transient: Time after which probes are compared with the sample.
        t_observe: End of the observation window.
        observe_stride: Time between compared probe samples.
        attractor_match_distance: Nearest-sample distance that counts as
            reaching the attractor.
        rng_seed: Seed of the scrambled Halton sequence.
        radius_schedule: Shrinking radii to probe in turn; replaces
            ``ball_radius`` when given.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    ball_radius: float = Field(default=1e-2, gt=0.0, description="Probe sphere radius")
    probes_per_equilibrium: int = Field(default=64, ge=1, description="Probes per equilibrium")
    t_transient: float = Field(default=100.0, gt=0.0, description="Transient before matching")
    t_observe: float = Field(default=200.0, gt=0.0, description="End of observation window")
    observe_stride: float = Field(default=0.05, gt=0.0, description="Matching sample stride")
    attractor_match_distance: float = Field(default=0.1, gt=0.0, description="Match threshold")
    rng_seed: int = Field(default=0, ge=0, description="Low-discrepancy sequence seed")
    radius_schedule: list[float] | None = Field(
        default=None, min_length=1, description="Shrinking probe radii"
    )

    @field_validator("radius_schedule")
    @classmethod
    def _check_schedule(cls, value: list[float] | None) -> list[float] | None:
        if value is None:
            return value
        if any(r <= 0.0 for r in value):
            raise ValueError("radii must be positive")
        if any(b >= a for a, b in zip(value, value[1:])):
            raise ValueError("radius_schedule must be strictly decreasing")
        return value

    @model_validator(mode="after")
    def _check_window(self) -> ClassificationConfig:
        if self.t_observe <= self.t_transient:
            raise ValueError("t_observe must exceed t_transient")
        return self

    @property
    def radii(self) -> list[float]:
        return list(self.radius_schedule) if self.radius_schedule else [self.ball_radius]


class ProbeOutcome(str, Enum):
    """What a single probe trajectory did."""

    REACHED = "reached"
    DIVERGED = "diverged"
    OTHER = "other-attractor"


class VerdictKind(str, Enum):
    """Classification verdict."""

    SELF_EXCITED = "SelfExcited"
    HIDDEN_CANDIDATE = "HiddenCandidate"


class RadiusProbes(BaseModel):
    """Probe outcomes on one sphere around one equilibrium.

    Attributes:
        radius: Sphere radius.
        outcomes: Outcome per probe, in probe order.
        closest: Minimum nearest-sample distance per probe (None if diverged).
        matched_probe: Initial point of the first probe that reached the sample.
    """

    radius: float = Field(..., gt=0.0, description="Sphere radius")
    outcomes: list[ProbeOutcome] = Field(..., min_length=1, description="Per-probe outcome")
    closest: list[float | None] = Field(..., description="Closest approach; None if diverged")
    matched_probe: Triple | None = Field(default=None, description="First matching probe")

    @property
    def reached(self) -> int:
        return sum(o is ProbeOutcome.REACHED for o in self.outcomes)

    @property
    def diverged(self) -> int:
        return sum(o is ProbeOutcome.DIVERGED for o in self.outcomes)


class EquilibriumProbeReport(BaseModel):
    """Probing results around one equilibrium.

    Attributes:
        label: Equilibrium label.
        point: Equilibrium coordinates.
        unstable_directions: Real unstable eigenvector directions used as
            leading probes (each counted once, probed with both signs).
        dimension: Local Lyapunov dimension at the equilibrium.
        radii: Outcomes per probed radius, largest first.
        matched: Whether a probe reached the sample at some probed radius.
    """

    label: str = Field(..., description="Equilibrium label")
    point: Triple = Field(..., description="Equilibrium coordinates")
    unstable_directions: int = Field(..., ge=0, le=3, description="Real unstable directions")
    dimension: EquilibriumDimension | None = Field(default=None, description="Local dimension")
    radii: list[RadiusProbes] = Field(..., min_length=1, description="Outcomes per radius")
    matched: bool = Field(..., description="Sample reached at some radius")


class ClassificationVerdict(BaseModel):
    """Self-excited or hidden-candidate verdict for a sampled attractor.

    Attributes:
        verdict: ``SelfExcited`` or ``HiddenCandidate``.
        equilibrium: Label of the equilibrium that excites the attractor.
        equilibria: Per-equilibrium probe reports.
        caveat: Finite probing cannot exclude self-excitation; always set
            for ``HiddenCandidate``.
        sample_size: Number of attractor sample points matched against.
    """

    verdict: VerdictKind = Field(..., description="Verdict")
    equilibrium: str | None = Field(default=None, description="Exciting equilibrium")
    equilibria: list[EquilibriumProbeReport] = Field(
        default_factory=list, description="Per-equilibrium reports"
    )
    caveat: bool = Field(..., description="Absence of evidence at finite sampling")
    sample_size: int = Field(..., ge=1, description="Attractor sample size")

    @model_validator(mode="after")
    def _check_contract(self) -> ClassificationVerdict:
        if self.verdict is VerdictKind.HIDDEN_CANDIDATE:
            if not self.caveat or self.equilibrium is not None:
                raise ValueError("HiddenCandidate needs the caveat and no equilibrium")
            return self
        matches = [r for r in self.equilibria if r.label == self.equilibrium and r.matched]
        if not matches or all(rp.matched_probe is None for rp in matches[0].radii):
            raise ValueError("SelfExcited needs a matching probe at its equilibrium")
        return self

    @property
    def label(self) -> str:
        """``SelfExcited(<label>)`` or ``HiddenCandidate``."""
        if self.verdict is VerdictKind.SELF_EXCITED:
            return f"{self.verdict.value}({self.equilibrium})"
        return self.verdict.value
