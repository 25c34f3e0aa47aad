"""
Image models
Grayscale rasters, intensity statistics and display histograms
"""
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from vtalign.models.base import SerializableMixin


@dataclass(frozen=True)
class Raster:
    """
    Single-channel floating-point image

    The pixel array is row-major with shape (height, width) and is made
    read-only on construction, so a Raster can be shared between threads.
    """
    data: np.ndarray

    def __post_init__(self):
        data = np.array(self.data, dtype=np.float64, copy=True)
        if data.ndim != 2 or data.size == 0:
            raise ValueError(f"Raster needs a non-empty 2-D array, got shape {data.shape}")
        if not np.all(np.isfinite(data)):
            raise ValueError("Raster intensities must be finite")
        data.setflags(write=False)
        object.__setattr__(self, 'data', data)

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def shape(self):
        return self.data.shape

    def is_constant(self) -> bool:
        return bool(self.data.min() == self.data.max())

    def __eq__(self, other):
        if not isinstance(other, Raster):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.data, other.data))

    def __repr__(self):
        return f'<Raster {self.width}x{self.height}>'


@dataclass(frozen=True)
class IntensityStats(SerializableMixin):
    """Intensity range of an image and the width of one histogram bin"""
    min: float
    max: float
    bin_width: float


@dataclass(frozen=True)
class Histogram(SerializableMixin):
    """Hard-assignment intensity histogram"""
    bin_count: int
    counts: np.ndarray
    range: IntensityStats = field(repr=False)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def to_frame(self) -> pd.DataFrame:
        """Histogram as a two-column bin,count table"""
        return pd.DataFrame({
            'bin': np.arange(self.bin_count),
            'count': self.counts.astype(np.int64)
        })
