"""
Registration models
Metric, optimizer and pipeline configuration plus their results
"""
import enum
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from vtalign.models.base import SerializableMixin
from vtalign.models.transforms import TransformKind, TransformMatrix, TransformParams


# ---------------------------------------------------------------------------
# Metric
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MetricConfig(SerializableMixin):
    """Mattes mutual information settings"""
    bin_count: int = 50
    sampling_fraction: float = 1.0
    sample_seed: int = 0
    min_valid_fraction: float = 0.25

    def __post_init__(self):
        if self.bin_count < 8:
            raise ValueError(f"bin_count must be >= 8, got {self.bin_count}")
        if not 0.0 < self.sampling_fraction <= 1.0:
            raise ValueError(f"sampling_fraction must be in (0, 1], got {self.sampling_fraction}")
        if not 0.0 < self.min_valid_fraction <= 1.0:
            raise ValueError(f"min_valid_fraction must be in (0, 1], got {self.min_valid_fraction}")
        if not 0 <= self.sample_seed < 2 ** 64:
            raise ValueError(f"sample_seed must be a 64-bit unsigned integer, got {self.sample_seed}")


@dataclass(frozen=True)
class MetricSamples:
    """
    Fixed-image samples paired with the moving intensity at their mapped location

    Column-wise form of (fixedCoord, fixedIntensity, movingIntensity); where
    ``valid`` is False the moving intensity is out of bounds and reads 0.
    """
    fixed_coords: np.ndarray
    fixed_intensity: np.ndarray
    moving_intensity: np.ndarray
    valid: np.ndarray

    @property
    def selected(self) -> int:
        return int(self.valid.size)

    @property
    def contributing(self) -> int:
        return int(np.count_nonzero(self.valid))


@dataclass(frozen=True)
class JointHistogram:
    """Parzen-smoothed joint distribution; joint[iota][kappa], iota thermal, kappa visual"""
    bin_count: int
    joint: np.ndarray
    marginal_t: np.ndarray
    marginal_v: np.ndarray
    contributing_samples: int
    selected_samples: int = 0


# ---------------------------------------------------------------------------
# Optimizer
# ---------------------------------------------------------------------------

class StopReason(enum.Enum):
    """Why an optimization ended"""
    RADIUS_BELOW_EPSILON = "radius_below_epsilon"
    MAX_ITERATIONS = "max_iterations"
    DEGENERATE_INPUT = "degenerate_input"


@dataclass(frozen=True)
class EvoConfig(SerializableMixin):
    """(1+1) evolutionary strategy settings"""
    growth_factor: float = 1.05
    shrink_factor: float = 0.98
    initial_radius: float = 6.25e-3
    epsilon: float = 1.5e-6
    max_iterations: int = 300
    seed: int = 0
    scales: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        if not self.growth_factor > 1.0:
            raise ValueError(f"growth_factor must be > 1, got {self.growth_factor}")
        if not 0.0 < self.shrink_factor < 1.0:
            raise ValueError(f"shrink_factor must be in (0, 1), got {self.shrink_factor}")
        if not self.initial_radius > 0.0:
            raise ValueError(f"initial_radius must be > 0, got {self.initial_radius}")
        if not self.epsilon > 0.0:
            raise ValueError(f"epsilon must be > 0, got {self.epsilon}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be positive, got {self.max_iterations}")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.scales is not None:
            scales = tuple(float(s) for s in self.scales)
            if not all(s > 0 and math.isfinite(s) for s in scales):
                raise ValueError(f"scales must be positive, got {scales}")
            object.__setattr__(self, 'scales', scales)

    def scales_for(self, dimension: int) -> np.ndarray:
        if self.scales is None:
            return np.ones(dimension)
        if len(self.scales) != dimension:
            raise ValueError(
                f"scales has {len(self.scales)} entries but the parameter vector has {dimension}"
            )
        return np.array(self.scales, dtype=np.float64)


@dataclass(frozen=True)
class TraceEntry(SerializableMixin):
    """One optimizer step: parent cost and radius after the step"""
    iteration: int
    cost: float
    radius: float
    accepted: bool


@dataclass(frozen=True)
class EvolutionState:
    """Parent, its cost, the search radius and the generator driving mutation"""
    parent: np.ndarray
    parent_cost: float
    radius: float
    rng: np.random.Generator
    iteration: int = 0
    accepted: int = 0
    trace: Tuple[TraceEntry, ...] = ()


@dataclass(frozen=True)
class EvolutionResult:
    """Outcome of an optimizer run"""
    best: np.ndarray
    best_cost: float
    reason: StopReason
    trace: Tuple[TraceEntry, ...]
    iterations: int
    accepted: int


def trace_frame(trace, **columns) -> pd.DataFrame:
    """Trace as a table (iteration, cost, radius, accepted) plus constant columns"""
    frame = pd.DataFrame(
        [entry.to_dict() for entry in trace],
        columns=['iteration', 'cost', 'radius', 'accepted']
    )
    for name, value in columns.items():
        frame.insert(0, name, value)
    return frame


# ---------------------------------------------------------------------------
# Pipeline
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RegistrationConfig:
    """End-to-end registration settings"""
    kind: TransformKind = TransformKind.SIMILARITY
    metric: MetricConfig = field(default_factory=MetricConfig)
    evo: EvoConfig = field(default_factory=EvoConfig)
    pyramid_levels: int = 0
    initial_params: Optional[TransformParams] = None

    def __post_init__(self):
        if not 0 <= self.pyramid_levels <= 4:
            raise ValueError(f"pyramid_levels must be in [0, 4], got {self.pyramid_levels}")
        if self.initial_params is not None and self.initial_params.kind is not self.kind:
            raise ValueError(
                f"initial_params are {self.initial_params.kind.value} but kind is {self.kind.value}"
            )

    @property
    def start(self) -> TransformParams:
        return self.initial_params or TransformParams.identity(self.kind)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'kind': self.kind.value,
            'metric': self.metric.to_dict(),
            'evo': self.evo.to_dict(),
            'pyramid_levels': self.pyramid_levels,
            'initial_params': self.start.to_dict(),
        }


@dataclass(frozen=True)
class LevelTrace:
    """Optimizer trace of one pyramid level (level 0 is full resolution)"""
    level: int
    width: int
    height: int
    iterations: int
    stop_reason: StopReason
    trace: Tuple[TraceEntry, ...]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'level': self.level,
            'width': self.width,
            'height': self.height,
            'iterations': self.iterations,
            'stop': self.stop_reason.value,
        }


@dataclass(frozen=True)
class RegistrationResult:
    """Recovered transform with its cost and convergence record"""
    params: TransformParams
    matrix: TransformMatrix
    center: Tuple[float, float]
    final_cost: float
    initial_cost: float
    stop_reason: StopReason
    iterations: int
    per_level_traces: Tuple[LevelTrace, ...] = ()
    degenerate: bool = False

    def trace_frame(self) -> pd.DataFrame:
        frames = [trace_frame(level.trace, level=level.level) for level in self.per_level_traces]
        if not frames:
            return trace_frame((), level=0)
        return pd.concat(frames, ignore_index=True)


@dataclass
class PairManifest:
    """Per-pair record written next to the aligned thermal frame"""
    visual_path: str
    thermal_path: str
    version: str
    result: Optional[RegistrationResult] = None
    error: Optional[str] = None
    timestamp: Optional[str] = None
    aligned_path: Optional[str] = None

    @property
    def success(self) -> bool:
        return self.result is not None and self.error is None

    @property
    def stem(self) -> str:
        return Path(self.visual_path).stem

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            'visual': self.visual_path,
            'thermal': self.thermal_path,
        }
        if self.result is not None:
            result = self.result
            data['transform'] = {
                'kind': result.params.kind.value,
                'params': list(result.params.values),
                'center': list(result.center),
                'matrix': result.matrix.to_list(),
            }
            data['cost'] = result.final_cost
            data['initial_cost'] = result.initial_cost
            data['iterations'] = result.iterations
            data['stop'] = result.stop_reason.value
            data['levels'] = [level.to_dict() for level in result.per_level_traces]
            data['degenerate'] = result.degenerate
        else:
            data['transform'] = None
        if self.aligned_path is not None:
            data['aligned'] = self.aligned_path
        if self.error is not None:
            data['error'] = self.error
        data['version'] = self.version
        if self.timestamp is not None:
            data['timestamp'] = self.timestamp
        return data
