"""Tests for run configuration layering."""

import json
from pathlib import Path

import numpy as np
import pytest
from pydantic import ValidationError

from chua_lyapunov.cli.config import (
    DEFAULT_PARAMETERS,
    ConfigError,
    RunConfig,
    SamplingConfig,
    SweepAxis,
    SweepConfig,
    apply_override,
    build_run_config,
    load_config_file,
    merge_into,
    parse_override,
)
from chua_lyapunov.variational import LyapunovRoute


@pytest.mark.unit
class TestModels:
    """Tests for configuration models."""

    def test_should_default_to_double_scroll_parameters(self) -> None:
        """Verify the default parameter set."""
        config = RunConfig()

        assert config.parameters == DEFAULT_PARAMETERS
        assert config.parameters.alpha == 10.0
        assert config.simulation.route is LyapunovRoute.BENETTIN

    def test_should_default_sweep_axis_to_m0(self) -> None:
        """Verify the default sweep runs m0 over three values."""
        axes = SweepConfig().axes

        assert len(axes) == 1
        assert axes[0].name == "m0"
        assert axes[0].values() == [0.5, 1.0, 1.5]

    def test_should_reject_unknown_axis(self) -> None:
        """Verify axis names must be parameter names."""
        with pytest.raises(ValidationError, match="unknown parameter"):
            SweepAxis(name="delta", start=0.0, stop=1.0, count=2)

    def test_should_reject_duplicate_axes(self) -> None:
        """Verify the two axes must differ."""
        axis = SweepAxis(name="alpha", start=1.0, stop=2.0, count=2)

        with pytest.raises(ValidationError, match="distinct"):
            SweepConfig(axes=[axis, axis])

    def test_should_default_to_thousand_point_sample_and_long_ladder(self) -> None:
        """Verify 1000 samples at stride 0.1 after a 100-unit transient, ladder up to 200."""
        cfg = SamplingConfig()

        assert cfg.t_transient == 100.0
        assert cfg.stride == 0.1
        assert cfg.samples_per_seed == 1000
        assert cfg.horizons == [2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0]

    def test_should_count_samples_per_seed(self) -> None:
        """Verify the sample count follows the window and stride."""
        assert SamplingConfig(t_sample=1.0, stride=0.5).samples_per_seed == 2
        assert SamplingConfig(t_sample=0.3, stride=0.5).samples_per_seed == 1

    def test_should_require_benettin_horizon_of_one_qr_interval(self) -> None:
        """Verify a lyapunov horizon shorter than qr_interval is a configuration error."""
        config = RunConfig.model_validate({"simulation": {"t": 0.25}})

        with pytest.raises(ConfigError, match="simulation.t"):
            config.require_exponent_horizon()

    def test_should_require_positive_svd_horizon(self) -> None:
        """Verify the svd route rejects a zero horizon and accepts a short one."""
        zero = RunConfig.model_validate({"simulation": {"t": 0.0, "route": "svd"}})
        short = RunConfig.model_validate({"simulation": {"t": 0.25, "route": "svd"}})

        with pytest.raises(ConfigError, match="svd"):
            zero.require_exponent_horizon()
        short.require_exponent_horizon()

    def test_should_reject_unordered_horizons(self) -> None:
        """Verify the horizon ladder must ascend strictly."""
        with pytest.raises(ValidationError, match="ascending"):
            SamplingConfig(horizons=[5.0, 5.0])

    def test_should_append_reproducible_random_seeds(self) -> None:
        """Verify explicit seeds come first and random ones depend on rng_seed."""
        cfg = SamplingConfig(seeds=[(1.0, 2.0, 3.0)], random_seeds=4, seed_box=0.5, rng_seed=9)

        points = cfg.seed_points()

        assert points.shape == (5, 3)
        assert points[0].tolist() == [1.0, 2.0, 3.0]
        assert np.all(np.abs(points[1:]) <= 0.5)
        assert np.array_equal(points, cfg.seed_points())


@pytest.mark.unit
class TestOverrides:
    """Tests for dotted-path overrides."""

    def test_should_parse_json_values(self) -> None:
        """Verify JSON literals are decoded."""
        assert parse_override("sampling.horizons=[1, 2]") == (["sampling", "horizons"], [1, 2])

    def test_should_fall_back_to_plain_string(self) -> None:
        """Verify non-JSON values stay strings."""
        assert parse_override("simulation.route=svd") == (["simulation", "route"], "svd")

    def test_should_reject_missing_equals(self) -> None:
        """Verify the PATH=VALUE shape is required."""
        with pytest.raises(ConfigError, match="dotted.path=VALUE"):
            parse_override("parameters.alpha")

    def test_should_create_intermediate_levels(self) -> None:
        """Verify apply_override builds missing nested dicts."""
        data: dict = {}

        apply_override(data, ["a", "b", "c"], 1)

        assert data == {"a": {"b": {"c": 1}}}

    def test_should_merge_nested_layers(self) -> None:
        """Verify merge_into keeps untouched sibling keys."""
        base = {"parameters": {"alpha": 1.0, "beta": 2.0}, "sweep": {"jobs": 1}}

        merge_into(base, {"parameters": {"alpha": 3.0}})

        assert base == {"parameters": {"alpha": 3.0, "beta": 2.0}, "sweep": {"jobs": 1}}


@pytest.mark.unit
class TestBuildRunConfig:
    """Tests for layering file, flags and overrides."""

    def test_should_layer_file_flags_and_overrides(self, tmp_path: Path) -> None:
        """Verify later layers win."""
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"parameters": {"alpha": 9.0, "beta": -14.0}}))

        config = build_run_config(
            config_path=path,
            overrides=["parameters.alpha=8.5"],
            out_dir=str(tmp_path / "results"),
            output_format="csv",
            jobs=3,
        )

        assert config.parameters.alpha == 8.5
        assert config.parameters.beta == -14.0
        assert config.parameters.m1 == DEFAULT_PARAMETERS.m1
        assert config.output.format == "csv"
        assert config.out_dir == tmp_path / "results"
        assert config.sweep.jobs == 3

    def test_should_read_yaml_files(self, tmp_path: Path) -> None:
        """Verify .yaml configs are accepted."""
        path = tmp_path / "run.yaml"
        path.write_text("simulation:\n  t: 12.5\n  route: svd\n")

        config = build_run_config(config_path=path)

        assert config.simulation.t == 12.5
        assert config.simulation.route is LyapunovRoute.SVD

    def test_should_seed_sampling_and_classification(self) -> None:
        """Verify --seed sets both seeds."""
        config = build_run_config(seed=42)

        assert config.sampling.rng_seed == 42
        assert config.classification.rng_seed == 42

    def test_should_report_field_path_of_invalid_value(self) -> None:
        """Verify validation errors name the dotted field path."""
        with pytest.raises(ConfigError, match=r"parameters\.alpha"):
            build_run_config(overrides=["parameters.alpha=abc"])

    def test_should_reject_unknown_field(self) -> None:
        """Verify unknown keys are rejected."""
        with pytest.raises(ConfigError, match=r"parameters\.delta"):
            build_run_config(overrides=["parameters.delta=1"])

    def test_should_report_json_line_and_column(self, tmp_path: Path) -> None:
        """Verify JSON syntax errors carry their position."""
        path = tmp_path / "broken.json"
        path.write_text('{\n  "parameters": {\n    "alpha": ,\n  }\n}\n')

        with pytest.raises(ConfigError, match="line 3, column"):
            load_config_file(path)

    def test_should_reject_missing_file(self, tmp_path: Path) -> None:
        """Verify a missing config file is a ConfigError."""
        with pytest.raises(ConfigError, match="does not exist"):
            load_config_file(tmp_path / "absent.json")

    def test_should_reject_non_mapping_document(self, tmp_path: Path) -> None:
        """Verify the top level must be an object."""
        path = tmp_path / "list.json"
        path.write_text("[1, 2, 3]")

        with pytest.raises(ConfigError, match="object"):
            load_config_file(path)
