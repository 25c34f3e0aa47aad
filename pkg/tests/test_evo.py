"""Tests for the (1+1) evolutionary strategy."""

import math

import pytest
import numpy as np

from vtalign.core import evo
from vtalign.exceptions import CostEvaluationError, InvalidStartError
from vtalign.models.registration import EvoConfig, StopReason, trace_frame


def quadratic(x):
    return float((x[0] - 3.0) ** 2)


def constant(x):
    return 1.0


class TestEvoConfig:
    @pytest.mark.parametrize("kwargs", [
        {"growth_factor": 1.0},
        {"shrink_factor": 1.0},
        {"shrink_factor": 0.0},
        {"initial_radius": 0.0},
        {"epsilon": -1.0},
        {"max_iterations": 0},
        {"seed": -1},
        {"scales": (1.0, 0.0)},
    ])
    def test_rejects_invalid(self, kwargs):
        with pytest.raises(ValueError):
            EvoConfig(**kwargs)

    def test_scales_length_checked(self):
        with pytest.raises(ValueError):
            EvoConfig(scales=(1.0, 2.0)).scales_for(3)


class TestStep:
    def test_accepts_strict_improvement(self):
        cfg = EvoConfig(initial_radius=1.0)
        state = evo.initial_state(np.array([0.0]), lambda x: 0.0 if x[0] != 0.0 else 1.0, cfg)
        after = evo.step(state, lambda x: 0.0, cfg)
        assert after.parent_cost == 0.0
        assert after.radius == pytest.approx(1.05)
        assert after.trace[-1].accepted

    def test_rejects_equal_cost(self):
        cfg = EvoConfig(initial_radius=1.0)
        state = evo.initial_state(np.array([0.0]), constant, cfg)
        after = evo.step(state, constant, cfg)
        np.testing.assert_array_equal(after.parent, [0.0])
        assert after.radius == pytest.approx(0.98)
        assert not after.trace[-1].accepted

    def test_failed_cost_is_rejection(self):
        cfg = EvoConfig(initial_radius=1.0)
        state = evo.initial_state(np.array([0.0]), constant, cfg)

        def failing(x):
            raise CostEvaluationError("outside")

        after = evo.step(state, failing, cfg)
        assert after.parent_cost == 1.0
        assert after.radius == pytest.approx(0.98)

    def test_infinite_cost_is_rejection(self):
        cfg = EvoConfig(initial_radius=1.0)
        state = evo.initial_state(np.array([0.0]), constant, cfg)
        after = evo.step(state, lambda x: math.inf, cfg)
        assert after.parent_cost == 1.0
        assert after.accepted == 0

    def test_mutation_uses_scales(self):
        cfg = EvoConfig(initial_radius=0.1, seed=5, scales=(1.0, 100.0))
        state = evo.initial_state(np.zeros(2), constant, cfg)
        z = np.random.default_rng(5).standard_normal(2)
        seen = []
        evo.step(state, lambda x: seen.append(x.copy()) or 0.0, cfg)
        np.testing.assert_allclose(seen[0], 0.1 * np.array([1.0, 100.0]) * z)

    def test_same_state_gives_same_step(self):
        cfg = EvoConfig(initial_radius=0.5, seed=11)
        state = evo.initial_state(np.array([0.0]), quadratic, cfg)
        first = evo.step(state, quadratic, cfg)
        second = evo.step(state, quadratic, cfg)
        np.testing.assert_array_equal(first.parent, second.parent)
        assert first.parent_cost == second.parent_cost
        assert first.rng is not state.rng

    def test_chained_steps_keep_advancing(self):
        cfg = EvoConfig(initial_radius=0.5, seed=11)
        state = evo.initial_state(np.array([0.0]), constant, cfg)
        seen = []
        record = lambda x: seen.append(float(x[0])) or 1.0
        evo.step(evo.step(state, record, cfg), record, cfg)
        assert seen[0] != seen[1]


class TestRun:
    def test_quadratic_converges(self):
        hits = 0
        for seed in range(10):
            cfg = EvoConfig(initial_radius=0.25, max_iterations=300, seed=seed)
            result = evo.run([0.0], quadratic, cfg)
            hits += abs(result.best[0] - 3.0) < 1e-2
        assert hits >= 9

    def test_seed_42_is_deterministic(self):
        cfg = EvoConfig(initial_radius=0.25, max_iterations=300, seed=42)
        first = evo.run([0.0], quadratic, cfg)
        second = evo.run([0.0], quadratic, cfg)
        assert abs(first.best[0] - 3.0) < 1e-2
        np.testing.assert_array_equal(first.best, second.best)
        assert first.trace == second.trace

    def test_constant_cost_stop_count(self):
        cfg = EvoConfig(max_iterations=1000)
        result = evo.run([0.0], constant, cfg)
        expected = math.ceil(math.log(cfg.epsilon / cfg.initial_radius) / math.log(cfg.shrink_factor))
        assert result.reason is StopReason.RADIUS_BELOW_EPSILON
        assert result.iterations == expected == 413
        assert result.accepted == 0

    def test_iteration_cap(self):
        result = evo.run([0.0], constant, EvoConfig(max_iterations=10))
        assert result.reason is StopReason.MAX_ITERATIONS
        assert result.iterations == 10

    def test_trace_properties(self):
        cfg = EvoConfig(initial_radius=0.5, max_iterations=200, seed=3)
        result = evo.run([0.0], quadratic, cfg)
        costs = [entry.cost for entry in result.trace]
        assert all(b <= a for a, b in zip(costs, costs[1:]))
        accepted = sum(entry.accepted for entry in result.trace)
        rejected = len(result.trace) - accepted
        expected = cfg.initial_radius * cfg.growth_factor ** accepted * cfg.shrink_factor ** rejected
        assert result.trace[-1].radius == pytest.approx(expected, rel=1e-12)

    def test_scaled_coordinate(self):
        def cost(x):
            return float(x[0] ** 2 + ((x[1] - 200.0) / 100.0) ** 2)

        cfg = EvoConfig(initial_radius=0.5, max_iterations=1000, seed=11, scales=(1.0, 100.0))
        result = evo.run([0.0, 0.0], cost, cfg)
        assert abs(result.best[0]) < 0.05
        assert abs(result.best[1] - 200.0) < 5.0

    def test_callback_sees_every_step(self):
        seen = []
        evo.run([0.0], constant, EvoConfig(max_iterations=7), callback=lambda s: seen.append(s.iteration))
        assert seen == list(range(1, 8))

    def test_invalid_start(self):
        def failing(x):
            raise CostEvaluationError("no overlap")

        with pytest.raises(InvalidStartError):
            evo.run([0.0], failing, EvoConfig())
        with pytest.raises(InvalidStartError):
            evo.run([0.0], lambda x: math.nan, EvoConfig())

    def test_trace_frame(self):
        result = evo.run([0.0], quadratic, EvoConfig(initial_radius=0.5, max_iterations=5))
        frame = trace_frame(result.trace, level=0)
        assert list(frame.columns) == ["level", "iteration", "cost", "radius", "accepted"]
        assert len(frame) == 5
