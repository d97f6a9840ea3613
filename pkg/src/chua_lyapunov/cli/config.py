"""Run configuration: models, file loading and dotted-path overrides.

Precedence, lowest first: model defaults, the config file, environment
variables (``CHUA_LYAPUNOV_*``), command-line flags and ``--set`` overrides.
"""

from __future__ import annotations

import json
import logging
import math
from pathlib import Path
from typing import Any, Literal

import numpy as np
import yaml
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from chua_lyapunov.analytic import CertificateConfig
from chua_lyapunov.attractors import ClassificationConfig
from chua_lyapunov.errors import ChuaLyapunovError
from chua_lyapunov.lyapunov import sample_count
from chua_lyapunov.model import PARAMETER_NAMES, Parameters
from chua_lyapunov.variational import IntegratorConfig, LyapunovRoute

logger = logging.getLogger(__name__)

ENV_PREFIX = "CHUA_LYAPUNOV_"

Triple = tuple[float, float, float]

DEFAULT_PARAMETERS = Parameters(
    alpha=10.0, beta=-100.0 / 7.0, gamma=0.0, m0=7.0 / 6.0, m1=1.0 / 16.0
)


class ConfigError(ChuaLyapunovError):
    """Raised for unreadable or invalid configuration (exit code 2)."""


class SimulationConfig(BaseModel):
    """Single-trajectory settings for ``simulate`` and ``lyapunov``.

    Attributes:
        u0: Initial point.
        t: Horizon.
        route: Finite-time exponent route for ``lyapunov``.
    """

    model_config = ConfigDict(extra="forbid")

    u0: Triple = Field(default=(0.1, 0.0, 0.0), description="Initial point")
    t: float = Field(default=100.0, ge=0.0, description="Horizon")
    route: LyapunovRoute = Field(default=LyapunovRoute.BENETTIN, description="Exponent route")


class SamplingConfig(BaseModel):
    """How the attractor sample K and the horizon ladder are built.

    Attributes:
        seeds: Explicit initial points.
        random_seeds: Extra seeds drawn uniformly from ``[-seed_box, seed_box]^3``.
        seed_box: Half-width of the random seed box.
        rng_seed: Seed of the random seed draw.
        t_transient: Transient discarded before sampling.
        t_sample: Length of the sampling window.
        stride: Time between sample points.
        bounding_box: Optional admissible box half-width.
        points: User-supplied sample; replaces trajectory sampling when given.
        horizons: Ascending ladder of horizons for the dimension.
    """

    model_config = ConfigDict(extra="forbid")

    seeds: list[Triple] = Field(default_factory=lambda: [(0.1, 0.0, 0.0)], description="Seeds")
    random_seeds: int = Field(default=0, ge=0, description="Number of random seeds")
    seed_box: float = Field(default=1.0, gt=0.0, description="Random seed box half-width")
    rng_seed: int = Field(default=0, ge=0, description="Random seed draw")
    t_transient: float = Field(default=100.0, gt=0.0, description="Transient time")
    t_sample: float = Field(default=100.0, gt=0.0, description="Sampling window")
    stride: float = Field(default=0.1, gt=0.0, description="Sample stride")
    bounding_box: float | None = Field(default=None, gt=0.0, description="Box half-width")
    points: list[Triple] | None = Field(default=None, min_length=1, description="User sample")
    horizons: list[float] = Field(
        default_factory=lambda: [2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0],
        min_length=1,
        description="Ladder",
    )

    @field_validator("horizons")
    @classmethod
    def _check_horizons(cls, value: list[float]) -> list[float]:
        if any(not (math.isfinite(h) and h > 0.0) for h in value):
            raise ValueError("horizons must be positive and finite")
        if any(b <= a for a, b in zip(value, value[1:])):
            raise ValueError("horizons must be strictly ascending")
        return value

    @property
    def samples_per_seed(self) -> int:
        """Points each bounded seed contributes to K."""
        return sample_count(self.t_sample, self.stride)

    def seed_points(self) -> NDArray[np.float64]:
        """Explicit seeds followed by the random draw."""
        explicit = np.asarray(self.seeds, dtype=np.float64).reshape(-1, 3)
        if self.random_seeds == 0:
            return explicit
        rng = np.random.default_rng(self.rng_seed)
        drawn = rng.uniform(-self.seed_box, self.seed_box, size=(self.random_seeds, 3))
        return np.vstack([explicit, drawn])


class SweepAxis(BaseModel):
    """One parameter axis of a sweep grid."""

    model_config = ConfigDict(extra="forbid")

    name: str = Field(..., description="Parameter name")
    start: float = Field(..., description="First value")
    stop: float = Field(..., description="Last value")
    count: int = Field(..., ge=1, description="Number of values")

    @field_validator("name")
    @classmethod
    def _check_name(cls, value: str) -> str:
        if value not in PARAMETER_NAMES:
            raise ValueError(f"unknown parameter {value!r}; expected one of {PARAMETER_NAMES}")
        return value

    @field_validator("start", "stop")
    @classmethod
    def _check_finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("axis bounds must be finite")
        return value

    def values(self) -> list[float]:
        return [float(v) for v in np.linspace(self.start, self.stop, self.count)]


class SweepConfig(BaseModel):
    """Parameter sweep settings.

    Attributes:
        axes: One or two axes; the grid is their product, first axis major.
        numeric: Also compute the numeric dimension proxy (sampling + ladder).
        classify: Also classify the sampled attractor (implies ``numeric``
            sampling).
        jobs: Worker processes.
        journal: Progress journal file name inside the output directory.
    """

    model_config = ConfigDict(extra="forbid")

    axes: list[SweepAxis] = Field(
        default_factory=lambda: [SweepAxis(name="m0", start=0.5, stop=1.5, count=3)],
        min_length=1,
        max_length=2,
        description="Sweep axes",
    )
    numeric: bool = Field(default=False, description="Compute the numeric dimension proxy")
    classify: bool = Field(default=False, description="Classify the sampled attractor")
    jobs: int = Field(default=1, ge=1, description="Worker processes")
    journal: str = Field(default="sweep.journal.jsonl", description="Progress journal name")

    @field_validator("axes")
    @classmethod
    def _check_distinct(cls, value: list[SweepAxis]) -> list[SweepAxis]:
        names = [a.name for a in value]
        if len(set(names)) != len(names):
            raise ValueError("sweep axes must name distinct parameters")
        return value


class OutputConfig(BaseModel):
    """Where results go."""

    model_config = ConfigDict(extra="forbid")

    out_dir: str = Field(default=".", description="Output directory")
    format: Literal["csv", "json"] | None = Field(
        default=None, description="Output format (command default when unset)"
    )


class RunConfig(BaseModel):
    """Complete, resolved configuration of one CLI run."""

    model_config = ConfigDict(extra="forbid")

    parameters: Parameters = Field(default=DEFAULT_PARAMETERS, description="Model parameters")
    integrator: IntegratorConfig = Field(
        default_factory=IntegratorConfig, description="Integrator settings"
    )
    certificate: CertificateConfig = Field(
        default_factory=CertificateConfig, description="Analytic criteria settings"
    )
    classification: ClassificationConfig = Field(
        default_factory=ClassificationConfig, description="Attractor classification settings"
    )
    simulation: SimulationConfig = Field(
        default_factory=SimulationConfig, description="Single-trajectory settings"
    )
    sampling: SamplingConfig = Field(default_factory=SamplingConfig, description="Sampling")
    sweep: SweepConfig = Field(default_factory=SweepConfig, description="Sweep settings")
    output: OutputConfig = Field(default_factory=OutputConfig, description="Output settings")

    def resolved(self) -> dict[str, Any]:
        """JSON-ready dump embedded in every output file."""
        return self.model_dump(mode="json")

    @property
    def out_dir(self) -> Path:
        return Path(self.output.out_dir).expanduser()

    def require_exponent_horizon(self) -> None:
        """Check that ``simulation.t`` is a valid horizon for ``simulation.route``.

        Raises:
            ConfigError: If the Benettin horizon is shorter than one QR
                interval, or the SVD horizon is not positive.
        """
        t, route = self.simulation.t, self.simulation.route
        if route is LyapunovRoute.BENETTIN and t < self.integrator.qr_interval:
            raise ConfigError(
                f"simulation.t: {t} is shorter than integrator.qr_interval "
                f"({self.integrator.qr_interval}) required by the benettin route"
            )
        if route is LyapunovRoute.SVD and not t > 0.0:
            raise ConfigError("simulation.t: the svd route needs a positive horizon")


def load_config_file(path: Path) -> dict[str, Any]:
    """Read a JSON (or ``.yaml``/``.yml``) config document.

    Raises:
        ConfigError: If the file is missing, unparsable or not a mapping.
            JSON errors carry the line and column.
    """
    if not path.exists():
        raise ConfigError(f"config file {path} does not exist")
    content = path.read_text(encoding="utf-8")
    try:
        if path.suffix in (".yaml", ".yml"):
            data = yaml.safe_load(content) or {}
        else:
            data = json.loads(content)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: line {e.lineno}, column {e.colno}: {e.msg}") from e
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        where = f"line {mark.line + 1}, column {mark.column + 1}: " if mark else ""
        raise ConfigError(f"{path}: {where}{e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return data


def parse_override(item: str) -> tuple[list[str], Any]:
    """Split ``dotted.path=VALUE``; VALUE is a JSON literal or a plain string."""
    key, sep, raw = item.partition("=")
    if not sep or not key.strip():
        raise ConfigError(f"override {item!r} must look like dotted.path=VALUE")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return [part for part in key.strip().split(".") if part], value


def apply_override(data: dict[str, Any], path: list[str], value: Any) -> None:
    """Set ``value`` at ``path`` inside nested dicts, creating levels as needed."""
    node = data
    for part in path[:-1]:
        child = node.get(part)
        if not isinstance(child, dict):
            child = {}
            node[part] = child
        node = child
    node[path[-1]] = value


def merge_into(base: dict[str, Any], layer: dict[str, Any]) -> dict[str, Any]:
    """Recursively merge ``layer`` over ``base`` (in place); returns ``base``."""
    for key, value in layer.items():
        if isinstance(value, dict) and isinstance(base.get(key), dict):
            merge_into(base[key], value)
        else:
            base[key] = value
    return base


def _format_validation(error: ValidationError) -> str:
    lines = []
    for item in error.errors():
        loc = ".".join(str(p) for p in item["loc"]) or "<root>"
        lines.append(f"{loc}: {item['msg']}")
    return "invalid configuration:\n  " + "\n  ".join(lines)


def build_run_config(
    config_path: Path | None = None,
    overrides: list[str] | None = None,
    out_dir: str | None = None,
    output_format: str | None = None,
    seed: int | None = None,
    jobs: int | None = None,
) -> RunConfig:
    """Layer file, flag and ``--set`` values into a validated ``RunConfig``.

    ``seed`` sets both the sampling and the classification seeds.

    Raises:
        ConfigError: On any unreadable or invalid value; the message names
            the offending line or dotted field path.
    """
    data = RunConfig().resolved()
    if config_path is not None:
        merge_into(data, load_config_file(config_path))
    if out_dir is not None:
        apply_override(data, ["output", "out_dir"], out_dir)
    if output_format is not None:
        apply_override(data, ["output", "format"], output_format)
    if seed is not None:
        apply_override(data, ["sampling", "rng_seed"], seed)
        apply_override(data, ["classification", "rng_seed"], seed)
    if jobs is not None:
        apply_override(data, ["sweep", "jobs"], jobs)
    for item in overrides or []:
        path, value = parse_override(item)
        apply_override(data, path, value)
    try:
        config = RunConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(_format_validation(e)) from e
    logger.debug("Resolved configuration: %s", config.resolved())
    return config
