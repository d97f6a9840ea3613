"""CLI tests for the chua-lyapunov subcommands."""

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from chua_lyapunov.__version__ import __version__
from chua_lyapunov.cli.main import (
    EXIT_BLOWUP,
    EXIT_CONFIG,
    EXIT_EMPTY,
    EXIT_ERROR,
    exit_code_for,
    main,
)
from chua_lyapunov.errors import AssumptionViolated, BlowUp, EmptySample, NoCertificate
from chua_lyapunov.export import read_csv_rows

FAST = ["--set", "integrator.dt=0.01", "--set", "certificate.x_points=201"]
BLOWUP = 'parameters={"alpha": 1, "beta": -1, "gamma": 1, "m0": 1, "m1": -1}'
BISTABLE = 'parameters={"alpha": 1, "beta": -1, "gamma": 2, "m0": 1.5, "m1": 1}'
LINEAR = 'parameters={"alpha": 1, "beta": 1, "gamma": 2, "m0": 0.5, "m1": 0}'


def _report(path: Path) -> dict:
    doc = json.loads(path.read_text())
    assert doc["toolkit_version"] == __version__
    assert "parameters" in doc["config"]
    return doc["report"]


@pytest.mark.unit
class TestExitCodes:
    """Tests for the exit-code policy."""

    @pytest.mark.parametrize(
        ("error", "code"),
        [
            (BlowUp(0.5), EXIT_BLOWUP),
            (OverflowError("overflow"), EXIT_BLOWUP),
            (EmptySample("empty"), EXIT_EMPTY),
            (NoCertificate("none"), EXIT_EMPTY),
            (AssumptionViolated("alpha*m1"), EXIT_ERROR),
            (ValueError("bad"), EXIT_ERROR),
        ],
    )
    def test_should_map_errors_to_codes(self, error: BaseException, code: int) -> None:
        """Verify each error family has its stable exit code."""
        assert exit_code_for(error) == code

    def test_should_show_version(self, cli_runner: CliRunner) -> None:
        """Verify --version prints the toolkit version."""
        result = cli_runner.invoke(main, ["--version"])

        assert result.exit_code == 0
        assert __version__ in result.output


@pytest.mark.unit
class TestConfigErrors:
    """Tests for configuration failures (exit code 2)."""

    def test_should_reject_invalid_value(self, cli_runner: CliRunner, out_dir: Path) -> None:
        """Verify a non-numeric parameter names its field."""
        result = cli_runner.invoke(
            main, ["bound", "--out", str(out_dir), "--set", "parameters.alpha=abc"]
        )

        assert result.exit_code == EXIT_CONFIG
        assert "parameters.alpha" in result.output

    def test_should_reject_unknown_field(self, cli_runner: CliRunner, out_dir: Path) -> None:
        """Verify unknown config keys are rejected."""
        result = cli_runner.invoke(
            main, ["bound", "--out", str(out_dir), "--set", "integrator.stepsize=1"]
        )

        assert result.exit_code == EXIT_CONFIG
        assert "integrator.stepsize" in result.output

    def test_should_reject_malformed_config_file(
        self, cli_runner: CliRunner, tmp_path: Path, out_dir: Path
    ) -> None:
        """Verify invalid JSON reports its line."""
        config = tmp_path / "run.json"
        config.write_text('{"parameters": {"alpha": 1,,}}')

        result = cli_runner.invoke(
            main, ["bound", "--out", str(out_dir), "--config", str(config)]
        )

        assert result.exit_code == EXIT_CONFIG
        assert "line 1" in result.output
        assert not (out_dir / "bound.json").exists()


@pytest.mark.unit
class TestSimulate:
    """Tests for the simulate command."""

    def test_should_write_single_row_for_zero_horizon(
        self, cli_runner: CliRunner, out_dir: Path
    ) -> None:
        """Verify t = 0 writes exactly the initial point."""
        result = cli_runner.invoke(
            main,
            ["simulate", "--out", str(out_dir), "--set", "simulation.t=0"],
        )

        assert result.exit_code == 0, result.output
        text = (out_dir / "trajectory.csv").read_text()
        assert text.startswith(f"# toolkit_version={__version__}\n# config=")
        header, rows = read_csv_rows(text)
        assert header == ["t", "x", "y", "z"]
        assert rows == [["0", "0.10000000000000001", "0", "0"]]

    def test_should_write_partial_trajectory_on_blowup(
        self, cli_runner: CliRunner, out_dir: Path
    ) -> None:
        """Verify divergence exits 3 after writing the samples taken."""
        result = cli_runner.invoke(
            main,
            [
                "simulate",
                "--out",
                str(out_dir),
                "--set",
                BLOWUP,
                "--set",
                "simulation.u0=[2, 0, 0]",
                "--set",
                "simulation.t=1",
                *FAST,
            ],
        )

        assert result.exit_code == EXIT_BLOWUP
        assert "BlowUp" in result.output
        _, rows = read_csv_rows((out_dir / "trajectory.csv").read_text())
        assert rows[0] == ["0", "2", "0", "0"]
        assert 0.0 < float(rows[-1][0]) < 0.5

    def test_should_write_byte_identical_csv_on_rerun(
        self, cli_runner: CliRunner, out_dir: Path
    ) -> None:
        """Verify two runs with the same configuration write the same bytes."""
        args = ["simulate", "--out", str(out_dir), "--set", "simulation.t=3", *FAST]

        first = cli_runner.invoke(main, args)
        assert first.exit_code == 0, first.output
        before = (out_dir / "trajectory.csv").read_bytes()
        second = cli_runner.invoke(main, args)

        assert second.exit_code == 0, second.output
        assert (out_dir / "trajectory.csv").read_bytes() == before
        _, rows = read_csv_rows(before.decode())
        assert len(rows) == 301


@pytest.mark.unit
class TestLyapunov:
    """Tests for the lyapunov command."""

    def test_should_write_exponents_and_history(
        self, cli_runner: CliRunner, out_dir: Path
    ) -> None:
        """Verify the Benettin route writes the spectrum and its history."""
        result = cli_runner.invoke(
            main, ["lyapunov", "--out", str(out_dir), "--set", "simulation.t=2", *FAST]
        )

        assert result.exit_code == 0, result.output
        report = _report(out_dir / "lyapunov.json")
        assert report["route"] == "benettin"
        assert len(report["les"]) == 3
        header, rows = read_csv_rows((out_dir / "lyapunov_history.csv").read_text())
        assert header == ["t", "le1", "le2", "le3"]
        assert [row[0] for row in rows] == ["0.5", "1", "1.5", "2"]

    def test_should_exit_config_for_horizon_below_qr_interval(
        self, cli_runner: CliRunner, out_dir: Path
    ) -> None:
        """Verify t < qr_interval on the Benettin route is a configuration error."""
        result = cli_runner.invoke(
            main, ["lyapunov", "--out", str(out_dir), "--set", "simulation.t=0.25", *FAST]
        )

        assert result.exit_code == EXIT_CONFIG
        assert "qr_interval" in result.output
        assert not (out_dir / "lyapunov.json").exists()


@pytest.mark.unit
class TestDimension:
    """Tests for the dimension command."""

    def test_should_report_user_sample(self, cli_runner: CliRunner, out_dir: Path) -> None:
        """Verify the per-point table for a user-supplied sample."""
        result = cli_runner.invoke(
            main,
            [
                "dimension",
                "--out",
                str(out_dir),
                "--format",
                "csv",
                "--set",
                LINEAR,
                "--set",
                "sampling.points=[[0.1, 0, 0], [0.5, -0.3, 0.2]]",
                "--set",
                "sampling.horizons=[1, 2]",
                *FAST,
            ],
        )

        assert result.exit_code == 0, result.output
        header, rows = read_csv_rows((out_dir / "dimension.csv").read_text())
        assert header == ["x", "y", "z", "le1", "le2", "le3", "dim"]
        assert len(rows) == 2
        assert all(1.0 < float(row[6]) < 2.0 for row in rows)

    def test_should_exit_empty_when_every_seed_blows_up(
        self, cli_runner: CliRunner, out_dir: Path
    ) -> None:
        """Verify an empty sample exits with code 4."""
        result = cli_runner.invoke(
            main,
            [
                "dimension",
                "--out",
                str(out_dir),
                "--set",
                BLOWUP,
                "--set",
                "sampling.seeds=[[2, 0, 0]]",
                "--set",
                "sampling.t_transient=1",
                "--set",
                "sampling.t_sample=1",
                *FAST,
            ],
        )

        assert result.exit_code == EXIT_EMPTY
        assert "EmptySample" in result.output


@pytest.mark.unit
class TestAnalyticCommands:
    """Tests for bound, converge and equilibria."""

    def test_should_write_bound_report(self, cli_runner: CliRunner, out_dir: Path) -> None:
        """Verify the default parameters use the origin reduction."""
        result = cli_runner.invoke(main, ["bound", "--out", str(out_dir), *FAST])

        assert result.exit_code == 0, result.output
        assert "✓ Wrote" in result.output
        report = _report(out_dir / "bound.json")
        assert report["bound_source"] == "corollary2"
        assert 0.0 <= report["bound_dim"] <= 3.0

    def test_should_certify_convergence(self, cli_runner: CliRunner, out_dir: Path) -> None:
        """Verify the bistable parameters converge with margin 0.5."""
        result = cli_runner.invoke(
            main, ["converge", "--out", str(out_dir), "--set", BISTABLE, *FAST]
        )

        assert result.exit_code == 0, result.output
        report = _report(out_dir / "converge.json")
        assert report["verdict"] == "Converges"
        assert report["margin"] == pytest.approx(0.5)

    def test_should_fail_convergence_without_hypothesis(
        self, cli_runner: CliRunner, out_dir: Path
    ) -> None:
        """Verify alpha*m1 <= 0 exits with code 1."""
        result = cli_runner.invoke(
            main, ["converge", "--out", str(out_dir), "--set", "parameters.m1=0"]
        )

        assert result.exit_code == EXIT_ERROR
        assert "AssumptionViolated" in result.output

    def test_should_list_equilibria(self, cli_runner: CliRunner, out_dir: Path) -> None:
        """Verify the symmetric triple of the default parameters."""
        result = cli_runner.invoke(
            main, ["equilibria", "--out", str(out_dir), "--format", "csv"]
        )

        assert result.exit_code == 0, result.output
        header, rows = read_csv_rows((out_dir / "equilibria.csv").read_text())
        assert header == ["label", "x", "y", "z", "residual", "local_dimension", "unstable"]
        assert [row[0] for row in rows] == ["minus", "origin", "plus"]
        assert float(rows[2][1]) == pytest.approx((8.0 / 3.0) ** 0.5)

    def test_should_honour_format_from_environment(
        self, cli_runner: CliRunner, out_dir: Path
    ) -> None:
        """Verify CHUA_LYAPUNOV_FORMAT selects the output format."""
        result = cli_runner.invoke(
            main,
            ["equilibria", "--out", str(out_dir)],
            env={"CHUA_LYAPUNOV_FORMAT": "csv"},
        )

        assert result.exit_code == 0, result.output
        assert (out_dir / "equilibria.csv").exists()


@pytest.mark.unit
class TestClassify:
    """Tests for the classify command."""

    def test_should_classify_stable_focus(self, cli_runner: CliRunner, out_dir: Path) -> None:
        """Verify the bistable focus is self-excited."""
        result = cli_runner.invoke(
            main,
            [
                "classify",
                "--out",
                str(out_dir),
                "--set",
                BISTABLE,
                "--set",
                "sampling.points=[[1.0801234, 0.7200823, -0.3600411]]",
                "--set",
                'classification={"probes_per_equilibrium": 4, "t_transient": 20,'
                ' "t_observe": 25, "observe_stride": 0.5}',
                *FAST,
            ],
        )

        assert result.exit_code == 0, result.output
        report = _report(out_dir / "classify.json")
        assert report["verdict"] == "SelfExcited"
        assert report["equilibrium"] in {"origin", "plus"}


@pytest.mark.unit
class TestSweep:
    """Tests for the sweep command."""

    def test_should_sweep_default_axis(self, cli_runner: CliRunner, out_dir: Path) -> None:
        """Verify one row per m0 value with the expected equilibrium counts."""
        result = cli_runner.invoke(main, ["sweep", "--out", str(out_dir), *FAST])

        assert result.exit_code == 0, result.output
        header, rows = read_csv_rows((out_dir / "sweep.csv").read_text())
        assert header[0] == "index"
        m0 = header.index("m0")
        eq = header.index("equilibria")
        assert [row[m0] for row in rows] == ["0.5", "1", "1.5"]
        assert [row[eq] for row in rows] == ["1", "1", "3"]
        assert (out_dir / "sweep.journal.jsonl").exists()

    def test_should_resume_to_identical_table(self, cli_runner: CliRunner, out_dir: Path) -> None:
        """Verify a rerun in the same directory reproduces sweep.csv."""
        first = cli_runner.invoke(main, ["sweep", "--out", str(out_dir), *FAST])
        assert first.exit_code == 0, first.output
        before = (out_dir / "sweep.csv").read_text()

        second = cli_runner.invoke(main, ["sweep", "--out", str(out_dir), *FAST])

        assert second.exit_code == 0, second.output
        assert (out_dir / "sweep.csv").read_text() == before

    def test_should_refuse_changed_configuration(
        self, cli_runner: CliRunner, out_dir: Path
    ) -> None:
        """Verify a different configuration cannot reuse the journal."""
        first = cli_runner.invoke(main, ["sweep", "--out", str(out_dir), *FAST])
        assert first.exit_code == 0, first.output

        result = cli_runner.invoke(
            main,
            ["sweep", "--out", str(out_dir), "--set", "parameters.alpha=9", *FAST],
        )

        assert result.exit_code == EXIT_CONFIG
        assert "different configuration" in result.output
