"""
Inspection models
Corners, cross-modal patch pairs and synthetic ground-truth pairs
"""
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from vtalign.models.base import SerializableMixin
from vtalign.models.imaging import Raster
from vtalign.models.transforms import TransformParams


@dataclass(frozen=True, order=True)
class Corner(SerializableMixin):
    """FAST corner; score is the largest threshold at which the segment test passes"""
    y: int
    x: int
    score: float


@dataclass(frozen=True)
class PatchPair:
    """Square visual patch and the thermal patch at the transformed center"""
    visual_patch: Raster
    thermal_patch: Raster
    visual_center: Tuple[int, int]
    thermal_center: Tuple[float, float]


@dataclass(frozen=True)
class SyntheticPair:
    """Visual frame, pseudo-thermal frame and the transform relating them"""
    visual: Raster
    thermal: Raster
    truth: TransformParams
    valid_mask: np.ndarray
