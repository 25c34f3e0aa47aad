"""
(1+1) evolutionary strategy
One parent, one Gaussian-mutated descendant per step; the search radius grows
when the descendant is accepted and shrinks when it is rejected
"""
import copy
import math
import logging
from dataclasses import replace
from typing import Callable, Optional

import numpy as np

from vtalign.exceptions import CostEvaluationError, InvalidStartError
from vtalign.models.registration import (
    EvoConfig, EvolutionResult, EvolutionState, StopReason, TraceEntry
)

logger = logging.getLogger(__name__)

CostFunction = Callable[[np.ndarray], float]


def safe_cost(cost: CostFunction, params: np.ndarray) -> float:
    """Cost value, with evaluation failures and non-finite values read as +inf"""
    try:
        value = float(cost(params))
    except CostEvaluationError as e:
        logger.debug(f"Candidate rejected: {e}")
        return math.inf
    return value if math.isfinite(value) else math.inf


def initial_state(initial, cost: CostFunction, cfg: EvoConfig) -> EvolutionState:
    """
    Evaluate the starting point and seed the generator

    Raises:
        InvalidStartError: the cost is undefined at the starting point
    """
    parent = np.array(initial, dtype=np.float64)
    cfg.scales_for(parent.size)
    try:
        parent_cost = float(cost(parent))
    except CostEvaluationError as e:
        raise InvalidStartError(f"cost undefined at the starting point: {e}") from e
    if not math.isfinite(parent_cost):
        raise InvalidStartError(f"cost at the starting point is {parent_cost}")

    return EvolutionState(
        parent=parent,
        parent_cost=parent_cost,
        radius=cfg.initial_radius,
        rng=np.random.default_rng(cfg.seed)
    )


def step(state: EvolutionState, cost: CostFunction, cfg: EvoConfig) -> EvolutionState:
    """
    One mutation/selection step

    The descendant parent + radius * scales * z (z standard normal) replaces
    the parent only on strict improvement. The input state is left untouched;
    the returned state carries its own advanced generator.
    """
    scales = cfg.scales_for(state.parent.size)
    rng = copy.deepcopy(state.rng)
    z = rng.standard_normal(state.parent.size)
    descendant = state.parent + state.radius * scales * z
    descendant_cost = safe_cost(cost, descendant)

    accepted = descendant_cost < state.parent_cost
    if accepted:
        parent, parent_cost = descendant, descendant_cost
        radius = state.radius * cfg.growth_factor
    else:
        parent, parent_cost = state.parent, state.parent_cost
        radius = state.radius * cfg.shrink_factor

    iteration = state.iteration + 1
    entry = TraceEntry(iteration=iteration, cost=parent_cost, radius=radius, accepted=accepted)
    return replace(
        state,
        parent=parent,
        parent_cost=parent_cost,
        radius=radius,
        rng=rng,
        iteration=iteration,
        accepted=state.accepted + int(accepted),
        trace=state.trace + (entry,)
    )


def run(initial, cost: CostFunction, cfg: EvoConfig,
        callback: Optional[Callable[[EvolutionState], None]] = None) -> EvolutionResult:
    """
    Minimize cost from initial until the radius drops below epsilon or the
    iteration budget is spent

    Args:
        initial: Starting parameter vector
        cost: Function of a parameter vector; CostEvaluationError means +inf
        cfg: Optimizer settings
        callback: Called with the state after every step

    Returns:
        EvolutionResult with the best parameters found
    """
    state = initial_state(initial, cost, cfg)
    logger.debug(f"(1+1) start: cost={state.parent_cost:.6f} radius={state.radius:.3e}")

    while state.radius >= cfg.epsilon and state.iteration < cfg.max_iterations:
        state = step(state, cost, cfg)
        if callback is not None:
            callback(state)

    reason = (StopReason.RADIUS_BELOW_EPSILON if state.radius < cfg.epsilon
              else StopReason.MAX_ITERATIONS)

    logger.debug(
        f"(1+1) stop: {reason.value} after {state.iteration} iterations "
        f"({state.accepted} accepted), cost={state.parent_cost:.6f}"
    )

    return EvolutionResult(
        best=state.parent,
        best_cost=state.parent_cost,
        reason=reason,
        trace=state.trace,
        iterations=state.iteration,
        accepted=state.accepted
    )
