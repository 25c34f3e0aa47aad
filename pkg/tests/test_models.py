"""Tests for model serialization, formatting helpers and configuration."""

import logging
import math
from datetime import datetime, timezone

import pytest

from vtalign import create_toolkit
from vtalign.config import Config, config
from vtalign.core.filters import format_datetime, format_number, format_params
from vtalign.core.geometry import to_matrix
from vtalign.models.registration import (
    EvoConfig,
    MetricConfig,
    PairManifest,
    RegistrationConfig,
    RegistrationResult,
    StopReason,
)
from vtalign.models.transforms import TransformKind, TransformParams


def make_result():
    params = TransformParams.similarity(q=0.01, s=1.0, tx=1.0, ty=2.0)
    center = (10.0, 10.0)
    return RegistrationResult(
        params=params,
        matrix=to_matrix(params, center),
        center=center,
        final_cost=-1.5,
        initial_cost=-1.0,
        stop_reason=StopReason.MAX_ITERATIONS,
        iterations=12,
    )


class TestSerialization:
    def test_metric_config(self):
        assert MetricConfig().to_dict() == {
            "bin_count": 50,
            "sampling_fraction": 1.0,
            "sample_seed": 0,
            "min_valid_fraction": 0.25,
        }

    def test_evo_config_defaults(self):
        data = EvoConfig().to_dict()
        assert data["growth_factor"] == 1.05
        assert data["shrink_factor"] == 0.98
        assert data["initial_radius"] == 6.25e-3
        assert data["epsilon"] == 1.5e-6
        assert data["max_iterations"] == 300
        assert data["scales"] is None

    def test_registration_config(self):
        data = RegistrationConfig(kind=TransformKind.AFFINE).to_dict()
        assert data["kind"] == "affine"
        assert data["initial_params"]["params"] == [0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0]

    def test_registration_config_validation(self):
        with pytest.raises(ValueError):
            RegistrationConfig(pyramid_levels=5)
        with pytest.raises(ValueError):
            RegistrationConfig(kind=TransformKind.AFFINE, initial_params=TransformParams.identity())

    def test_manifest_success(self):
        manifest = PairManifest("v/a.png", "t/a.png", "1.0.0", result=make_result())
        data = manifest.to_dict()
        assert manifest.success and manifest.stem == "a"
        assert data["transform"]["params"] == [0.01, 1.0, 1.0, 2.0]
        assert data["transform"]["center"] == [10.0, 10.0]
        assert data["cost"] == -1.5
        assert data["stop"] == "max_iterations"
        assert "error" not in data and "timestamp" not in data

    def test_manifest_failure(self):
        manifest = PairManifest("v/b.png", "t/b.png", "1.0.0", error="InvalidStartError: no overlap")
        data = manifest.to_dict()
        assert not manifest.success
        assert data["transform"] is None
        assert data["error"] == "InvalidStartError: no overlap"


class TestFilters:
    def test_format_datetime_utc(self):
        value = datetime(2024, 3, 1, 12, 30, 5, tzinfo=timezone.utc)
        assert format_datetime(value) == "2024-03-01T12:30:05Z"

    def test_format_datetime_naive_is_utc(self):
        assert format_datetime(datetime(2024, 3, 1, 0, 0, 0)) == "2024-03-01T00:00:00Z"

    def test_format_number(self):
        assert format_number(1.23456, 2) == "1.23"
        assert format_number(None) == "n/a"

    def test_format_params_degrees(self):
        text = format_params(TransformParams.similarity(q=math.radians(3.0), tx=4.0), decimals=2)
        assert text == "similarity(q=3.00deg, s=1.00, tx=4.00, ty=0.00)"


class TestConfig:
    def test_registry(self):
        assert config["testing"].TESTING
        assert config["default"].METRIC_BIN_COUNT == 50
        assert Config.HISTOGRAM_BINS == 256
        assert Config.FAST_CONTIGUOUS == 9

    def test_create_toolkit_uses_env(self):
        cfg = create_toolkit()
        assert cfg is config["testing"]
        assert logging.getLogger("vtalign").level == logging.WARNING

    def test_production_logs_to_file(self):
        assert config["production"].LOG_TO_FILE
        assert not config["development"].LOG_TO_FILE
