"""
Interpolation kernels and image resampling
B-spline Parzen windows, cubic-spline prefiltering and inverse-mapped warping
"""
import enum
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.ndimage import map_coordinates, spline_filter

from vtalign.core.geometry import apply_points
from vtalign.exceptions import ImageTooSmallError
from vtalign.models.imaging import Raster
from vtalign.models.transforms import TransformMatrix

# Slack on the [0, W-1] x [0, H-1] bounds test for round-off in mapped coordinates
BOUNDS_TOLERANCE = 1e-9
MIN_SPLINE_SIZE = 4


class InterpolationKind(enum.Enum):
    """Interpolation scheme"""
    NEAREST_NEIGHBOR = "nearest"
    LINEAR = "linear"
    CUBIC_SPLINE = "cubic"


_SPLINE_ORDER = {
    InterpolationKind.NEAREST_NEIGHBOR: 0,
    InterpolationKind.LINEAR: 1,
    InterpolationKind.CUBIC_SPLINE: 3,
}


def beta0(x):
    """Zero-order B-spline on the half-open support [-0.5, 0.5)"""
    x = np.asarray(x, dtype=np.float64)
    out = ((x >= -0.5) & (x < 0.5)).astype(np.float64)
    return out if out.ndim else float(out)


def beta3(x):
    """Centered cubic B-spline, supported on (-2, 2)"""
    a = np.abs(np.asarray(x, dtype=np.float64))
    out = np.where(
        a < 1.0,
        2.0 / 3.0 - a * a + a * a * a / 2.0,
        np.where(a < 2.0, (2.0 - a) ** 3 / 6.0, 0.0)
    )
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class SplineCoefficients:
    """
    Cubic B-spline coefficient image of a Raster

    Keeps the source intensities alongside so nearest-neighbor and linear
    lookups can run on raw samples.
    """
    coeffs: np.ndarray
    samples: np.ndarray

    @property
    def width(self) -> int:
        return self.coeffs.shape[1]

    @property
    def height(self) -> int:
        return self.coeffs.shape[0]


def prefilter(raster: Raster) -> SplineCoefficients:
    """
    Cubic B-spline coefficients via the causal/anticausal recursive filter
    (pole sqrt(3) - 2) with mirror boundaries
    """
    if raster.width < MIN_SPLINE_SIZE or raster.height < MIN_SPLINE_SIZE:
        raise ImageTooSmallError(
            f"spline prefilter needs at least {MIN_SPLINE_SIZE}x{MIN_SPLINE_SIZE}, "
            f"got {raster.width}x{raster.height}"
        )
    coeffs = spline_filter(raster.data, order=3, mode='mirror', output=np.float64)
    coeffs.setflags(write=False)
    return SplineCoefficients(coeffs=coeffs, samples=raster.data)


def in_bounds(width: int, height: int, xs, ys) -> np.ndarray:
    """Mask of coordinates inside [0, width-1] x [0, height-1]"""
    return ((xs >= -BOUNDS_TOLERANCE) & (xs <= width - 1 + BOUNDS_TOLERANCE)
            & (ys >= -BOUNDS_TOLERANCE) & (ys <= height - 1 + BOUNDS_TOLERANCE))


def sample(coeffs: SplineCoefficients, xs, ys,
           kind: InterpolationKind = InterpolationKind.CUBIC_SPLINE) -> Tuple[np.ndarray, np.ndarray]:
    """
    Vectorized interpolation

    Returns:
        (values, valid): out-of-bounds positions are False in valid and 0 in values
    """
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    valid = in_bounds(coeffs.width, coeffs.height, xs, ys)
    values = np.zeros(xs.shape, dtype=np.float64)
    if not valid.any():
        return values, valid

    coords = np.vstack([ys[valid], xs[valid]])
    if kind is InterpolationKind.CUBIC_SPLINE:
        values[valid] = map_coordinates(coeffs.coeffs, coords, order=3,
                                        mode='mirror', prefilter=False)
    else:
        values[valid] = map_coordinates(coeffs.samples, coords, order=_SPLINE_ORDER[kind],
                                        mode='nearest', prefilter=False)
    return values, valid


def interpolate(coeffs: SplineCoefficients, x: float, y: float,
                kind: InterpolationKind = InterpolationKind.CUBIC_SPLINE) -> Optional[float]:
    """Intensity at (x, y), or None when the point is out of bounds"""
    values, valid = sample(coeffs, np.array([x]), np.array([y]), kind)
    if not valid[0]:
        return None
    return float(values[0])


def pixel_grid(width: int, height: int) -> Tuple[np.ndarray, np.ndarray]:
    """Integer pixel coordinates (xs, ys), each of shape (height, width)"""
    ys, xs = np.mgrid[0:height, 0:width]
    return xs.astype(np.float64), ys.astype(np.float64)


def warp(source: Raster, m: TransformMatrix, out_width: int, out_height: int,
         kind: InterpolationKind = InterpolationKind.CUBIC_SPLINE,
         coeffs: Optional[SplineCoefficients] = None) -> Tuple[Raster, np.ndarray]:
    """
    Inverse-mapped resampling: output(x, y) = source(apply(m, (x, y)))

    Args:
        source: Image sampled through the transform
        m: Transform from output coordinates into source coordinates
        out_width, out_height: Output size
        kind: Interpolation scheme
        coeffs: Precomputed spline coefficients of source, if available

    Returns:
        (warped raster, valid mask); invalid pixels are 0
    """
    if coeffs is None:
        if kind is InterpolationKind.CUBIC_SPLINE:
            coeffs = prefilter(source)
        else:
            coeffs = SplineCoefficients(coeffs=source.data, samples=source.data)

    xs, ys = pixel_grid(out_width, out_height)
    mx, my = apply_points(m, xs, ys)
    values, valid = sample(coeffs, mx, my, kind)
    return Raster(values), valid
