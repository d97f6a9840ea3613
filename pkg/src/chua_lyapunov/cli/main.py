"""Command-line interface for chua-lyapunov."""

from __future__ import annotations

import functools
import logging
import sys
from collections.abc import Callable, Iterator
from contextlib import contextmanager
from pathlib import Path
from typing import Any, NoReturn, TypeVar

import click
import numpy as np
from dotenv import load_dotenv

from chua_lyapunov.__version__ import __version__
from chua_lyapunov.analytic import (
    analytic_report,
    corollary2_bound,
    equilibrium_dimension,
    theorem3_search,
    theorem4_convergence,
)
from chua_lyapunov.attractors import classify, probe_seeds
from chua_lyapunov.cli.config import ENV_PREFIX, ConfigError, RunConfig, build_run_config
from chua_lyapunov.cli.sweep import run_sweep, sample_for, table
from chua_lyapunov.errors import (
    AssumptionViolated,
    BlowUp,
    ChuaLyapunovError,
    EmptySample,
    NoCertificate,
    StepUnderflow,
    TangentOverflow,
)
from chua_lyapunov.export import trajectory_rows, write_csv, write_json
from chua_lyapunov.lyapunov import dimension_report
from chua_lyapunov.model import equilibria
from chua_lyapunov.variational import (
    LyapunovRoute,
    finite_time_les_benettin,
    finite_time_les_svd,
    integrate,
    integrate_batch,
)

# Load environment files in priority order (later files override earlier)
_user_env = Path.home() / ".chua-lyapunov" / ".env"
_env_file = Path(".env")
_env_local = Path(".env.local")

if _user_env.exists():
    load_dotenv(_user_env, override=True)
if _env_file.exists():
    load_dotenv(_env_file, override=True)
if _env_local.exists():
    load_dotenv(_env_local, override=True)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CONFIG = 2
EXIT_BLOWUP = 3
EXIT_EMPTY = 4

F = TypeVar("F", bound=Callable[..., Any])


def exit_code_for(error: BaseException) -> int:
    """Stable exit code for an exception raised by a subcommand."""
    if isinstance(error, ConfigError):
        return EXIT_CONFIG
    if isinstance(error, (BlowUp, TangentOverflow, StepUnderflow, OverflowError)):
        return EXIT_BLOWUP
    if isinstance(error, (EmptySample, NoCertificate)):
        return EXIT_EMPTY
    return EXIT_ERROR


def _fail(error: BaseException) -> NoReturn:
    code = exit_code_for(error)
    click.echo(f"❌ {type(error).__name__}: {error}", err=True)
    sys.exit(code)


@contextmanager
def _exit_on_error() -> Iterator[None]:
    try:
        yield
    except (ChuaLyapunovError, ValueError, OverflowError, OSError) as e:
        logger.debug("Command failed", exc_info=True)
        _fail(e)


def run_options(command: F) -> F:
    """Options shared by every subcommand."""
    options = [
        click.option(
            "--config",
            "config_path",
            type=click.Path(dir_okay=False, path_type=Path),
            envvar=f"{ENV_PREFIX}CONFIG",
            help="JSON (or YAML) run configuration.",
        ),
        click.option("--out", "out_dir", envvar=f"{ENV_PREFIX}OUT", help="Output directory."),
        click.option(
            "--format",
            "output_format",
            type=click.Choice(["csv", "json"]),
            envvar=f"{ENV_PREFIX}FORMAT",
            help="Output format.",
        ),
        click.option("--seed", type=int, envvar=f"{ENV_PREFIX}SEED", help="Random seed."),
        click.option("--jobs", type=int, envvar=f"{ENV_PREFIX}JOBS", help="Worker processes."),
        click.option(
            "--set",
            "overrides",
            multiple=True,
            metavar="PATH=VALUE",
            help="Override a config field, e.g. --set parameters.alpha=9.5",
        ),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def _load(**options: Any) -> RunConfig:
    return build_run_config(
        config_path=options["config_path"],
        overrides=list(options["overrides"]),
        out_dir=options["out_dir"],
        output_format=options["output_format"],
        seed=options["seed"],
        jobs=options["jobs"],
    )


def _configured(command: Callable[[RunConfig], None]) -> Callable[..., None]:
    """Resolve the run configuration, then run ``command`` under the exit-code policy."""

    @functools.wraps(command)
    def wrapper(**options: Any) -> None:
        with _exit_on_error():
            command(_load(**options))

    return wrapper


def _written(path: Path) -> None:
    click.echo(f"✓ Wrote {path}")


@click.group()
@click.version_option(version=__version__)
@click.option("--verbose", "-v", is_flag=True, help="Log progress and diagnostics (DEBUG).")
def main(verbose: bool) -> None:
    """Lyapunov dimension toolkit for the Chua memristor model.

    Finite-time Lyapunov exponents and Kaplan-Yorke dimensions, analytic
    dimension bounds and convergence certificates, entropy bounds and
    self-excited/hidden attractor classification.

    Exit codes: 0 success, 2 configuration error, 3 numerical blow-up,
    4 empty result, 1 any other error.
    """
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


@main.command()
@run_options
@_configured
def simulate(config: RunConfig) -> None:
    """Integrate one trajectory and write ``t,x,y,z`` samples.

    On blow-up the samples up to the divergence are still written and the
    command exits with code 3.
    """
    sim = config.simulation
    fmt = config.output.format or "csv"
    path = config.out_dir / f"trajectory.{fmt}"

    def _write(times: Any, states: Any) -> None:
        if fmt == "csv":
            write_csv(path, ["t", "x", "y", "z"], trajectory_rows(times, states), config.resolved())
        else:
            write_json(
                path,
                {"t": list(map(float, times)), "states": np.asarray(states).tolist()},
                config.resolved(),
            )
        _written(path)

    try:
        trajectory = integrate(config.parameters, sim.u0, sim.t, config.integrator)
    except BlowUp as e:
        if e.times is not None and e.states is not None:
            _write(e.times, e.states)
        raise
    _write(trajectory.times, trajectory.states)


@main.command()
@run_options
@_configured
def lyapunov(config: RunConfig) -> None:
    """Finite-time Lyapunov exponents at one initial point.

    The Benettin route also writes the exponent history ``t,le1,le2,le3``.
    """
    config.require_exponent_horizon()
    sim = config.simulation
    p, cfg = config.parameters, config.integrator
    if sim.route is LyapunovRoute.SVD:
        spectrum = finite_time_les_svd(p, sim.u0, sim.t, cfg)
    else:
        spectrum = finite_time_les_benettin(p, sim.u0, sim.t, cfg, history=True)

    if (config.output.format or "json") == "json":
        _written(write_json(config.out_dir / "lyapunov.json", spectrum, config.resolved()))
    else:
        header = ["t", "le1", "le2", "le3", "les_sum", "trace_average"]
        row = [spectrum.t, *spectrum.les, spectrum.les_sum, spectrum.trace_average]
        _written(write_csv(config.out_dir / "lyapunov.csv", header, [row], config.resolved()))
    if spectrum.history:
        path = config.out_dir / "lyapunov_history.csv"
        _written(write_csv(path, ["t", "le1", "le2", "le3"], spectrum.history, config.resolved()))


def _analytic_bound(config: RunConfig) -> float | None:
    try:
        return corollary2_bound(config.parameters, config.certificate)
    except AssumptionViolated:
        pass
    try:
        return theorem3_search(config.parameters, config.certificate).bound
    except NoCertificate:
        return None


@main.command()
@run_options
@click.option("--classify", "with_classification", is_flag=True, help="Also classify K.")
def dimension(with_classification: bool, **options: Any) -> None:
    """Finite-time Lyapunov dimension of a sampled attractor.

    Samples K, computes the per-point distribution at the largest horizon
    and the set dimension over the horizon ladder, and attaches the
    analytic bound and convergence verdict.
    """
    with _exit_on_error():
        config = _load(**options)
        p = config.parameters
        sample = sample_for(config, p)
        report = dimension_report(
            p, sample, config.sampling.horizons, config.integrator, _analytic_bound(config)
        )
        updates: dict[str, Any] = {}
        try:
            updates["convergence_verdict"] = theorem4_convergence(
                p, config.certificate
            ).verdict.value
        except AssumptionViolated:
            logger.info("Convergence criterion not applicable for %s", p)
        if with_classification:
            verdict = classify(p, sample, equilibria(p), config.classification, config.integrator)
            updates["classification_verdict"] = verdict.label
        report = report.model_copy(update=updates)

        if (config.output.format or "json") == "json":
            _written(write_json(config.out_dir / "dimension.json", report, config.resolved()))
        else:
            header = ["x", "y", "z", "le1", "le2", "le3", "dim"]
            rows = [[*pt.point, *pt.les, pt.dim] for pt in report.points]
            _written(write_csv(config.out_dir / "dimension.csv", header, rows, config.resolved()))


@main.command()
@run_options
@_configured
def bound(config: RunConfig) -> None:
    """Analytic dimension bound, exact dimension and entropy bound."""
    report = analytic_report(config.parameters, config.certificate)
    if (config.output.format or "json") == "json":
        _written(write_json(config.out_dir / "bound.json", report, config.resolved()))
        return
    header = [
        "lambda1_0",
        "lambda2_0",
        "lambda3_0",
        "exact_dim",
        "bound_dim",
        "bound_source",
        "entropy_bound",
    ]
    row = [
        *report.lambda0,
        report.exact_dim,
        report.bound_dim,
        report.bound_source,
        report.entropy_bound,
    ]
    _written(write_csv(config.out_dir / "bound.csv", header, [row], config.resolved()))


@main.command()
@run_options
@_configured
def converge(config: RunConfig) -> None:
    """Global convergence certificate from lambda1 + lambda2."""
    verdict = theorem4_convergence(config.parameters, config.certificate)
    if (config.output.format or "json") == "json":
        _written(write_json(config.out_dir / "converge.json", verdict, config.resolved()))
        return
    header = ["verdict", "margin", "supremum", "reduction"]
    row = [verdict.verdict.value, verdict.margin, verdict.supremum, verdict.reduction]
    _written(write_csv(config.out_dir / "converge.csv", header, [row], config.resolved()))


@main.command("classify")
@run_options
@click.option("--dump-probes", is_flag=True, help="Also write probe trajectories as CSV.")
def classify_cmd(dump_probes: bool, **options: Any) -> None:
    """Classify the sampled attractor as self-excited or a hidden candidate."""
    with _exit_on_error():
        config = _load(**options)
        p, cls_cfg = config.parameters, config.classification
        sample = sample_for(config, p)
        eqs = equilibria(p)
        verdict = classify(p, sample, eqs, cls_cfg, config.integrator)

        if (config.output.format or "json") == "json":
            _written(write_json(config.out_dir / "classify.json", verdict, config.resolved()))
        else:
            header = ["equilibrium", "radius", "reached", "diverged", "probes", "matched"]
            rows = [
                [r.label, rp.radius, rp.reached, rp.diverged, len(rp.outcomes), r.matched]
                for r in verdict.equilibria
                for rp in r.radii
            ]
            _written(write_csv(config.out_dir / "classify.csv", header, rows, config.resolved()))

        if dump_probes:
            times = np.arange(
                0.0, cls_cfg.t_observe + 0.5 * cls_cfg.observe_stride, cls_cfg.observe_stride
            )
            rows = []
            for eq in eqs:
                for radius in cls_cfg.radii:
                    seeds = probe_seeds(p, eq, radius, cls_cfg)
                    states, _ = integrate_batch(p, seeds, times, config.integrator)
                    for k in range(seeds.shape[0]):
                        for t, u in zip(times, states[k]):
                            if np.all(np.isfinite(u)):
                                rows.append([eq.label, radius, k, t, *u])
            header = ["equilibrium", "radius", "probe", "t", "x", "y", "z"]
            _written(write_csv(config.out_dir / "probes.csv", header, rows, config.resolved()))


@main.command("equilibria")
@run_options
@_configured
def equilibria_cmd(config: RunConfig) -> None:
    """Equilibria with their local Lyapunov dimensions."""
    p = config.parameters
    eqs = equilibria(p)
    dims = [equilibrium_dimension(p, eq) for eq in eqs]
    if (config.output.format or "json") == "json":
        report = {
            "equilibria": [eq.model_dump(mode="json") for eq in eqs],
            "dimensions": [d.model_dump(mode="json") for d in dims],
        }
        _written(write_json(config.out_dir / "equilibria.json", report, config.resolved()))
        return
    header = ["label", "x", "y", "z", "residual", "local_dimension", "unstable"]
    rows = [
        [eq.label, *eq.point, eq.residual, d.local_dimension, d.unstable]
        for eq, d in zip(eqs, dims)
    ]
    _written(write_csv(config.out_dir / "equilibria.csv", header, rows, config.resolved()))


@main.command()
@run_options
@_configured
def sweep(config: RunConfig) -> None:
    """Parameter sweep over one or two axes.

    One row per grid point in axis-major order; failing points carry an
    error message. Progress is journaled so an interrupted sweep resumes
    where it stopped.
    """
    journal = config.out_dir / config.sweep.journal

    def progress(msg: str) -> None:
        click.echo(msg, err=True)

    rows = run_sweep(config, journal, progress)
    if (config.output.format or "csv") == "csv":
        header, cells = table(rows)
        _written(write_csv(config.out_dir / "sweep.csv", header, cells, config.resolved()))
    else:
        _written(write_json(config.out_dir / "sweep.json", rows, config.resolved()))


if __name__ == "__main__":
    main()
