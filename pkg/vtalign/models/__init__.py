"""
Models package initialization
"""
from vtalign.models.imaging import Raster, IntensityStats, Histogram
from vtalign.models.transforms import (
    TransformKind, TransformParams, TransformMatrix, PARAM_NAMES
)
from vtalign.models.registration import (
    MetricConfig, MetricSamples, JointHistogram,
    EvoConfig, EvolutionState, EvolutionResult, TraceEntry, StopReason, trace_frame,
    RegistrationConfig, RegistrationResult, LevelTrace, PairManifest
)
from vtalign.models.inspection import Corner, PatchPair, SyntheticPair

__all__ = [
    'Raster', 'IntensityStats', 'Histogram',
    'TransformKind', 'TransformParams', 'TransformMatrix', 'PARAM_NAMES',
    'MetricConfig', 'MetricSamples', 'JointHistogram',
    'EvoConfig', 'EvolutionState', 'EvolutionResult', 'TraceEntry', 'StopReason', 'trace_frame',
    'RegistrationConfig', 'RegistrationResult', 'LevelTrace', 'PairManifest',
    'Corner', 'PatchPair', 'SyntheticPair'
]
