"""Shared fixtures for the vtalign test suite."""

import pytest
import numpy as np

from vtalign.config import TestingConfig
from vtalign.models.imaging import Raster
from vtalign.simulation import structured_scene


@pytest.fixture
def settings():
    return TestingConfig


@pytest.fixture
def scene() -> Raster:
    """Structured 96x96 scene; small enough for fast registration tests."""
    return structured_scene(96, 96, seed=3)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def square_image() -> Raster:
    """Bright 8x8 square (rows/cols 12..19) on a dark 32x32 background."""
    data = np.zeros((32, 32))
    data[12:20, 12:20] = 200.0
    return Raster(data)


@pytest.fixture
def ramp() -> Raster:
    """f(x, y) = x on a 64x64 grid."""
    return Raster(np.tile(np.arange(64, dtype=np.float64), (64, 1)))


@pytest.fixture(autouse=True)
def testing_env(monkeypatch):
    monkeypatch.setenv("VTALIGN_ENV", "testing")
