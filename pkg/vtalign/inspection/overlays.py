"""
Registration overlays
Red-cyan, difference and checkerboard composites of a visual frame and the
aligned thermal frame
"""
import numpy as np

from vtalign.exceptions import SizeMismatchError
from vtalign.models.imaging import Raster

MIN_TILE = 4


def _check_sizes(fixed: Raster, aligned: Raster) -> None:
    if fixed.shape != aligned.shape:
        raise SizeMismatchError(
            f"overlay inputs differ in size: {fixed.width}x{fixed.height} "
            f"vs {aligned.width}x{aligned.height}"
        )


def rescale(raster: Raster) -> np.ndarray:
    """Linear min/max stretch to [0, 255]; a constant image maps to 0"""
    data = raster.data
    lo, hi = data.min(), data.max()
    if hi == lo:
        return np.zeros_like(data)
    return (data - lo) * (255.0 / (hi - lo))


def overlay_redcyan(fixed: Raster, aligned_moving: Raster) -> np.ndarray:
    """H x W x 3 composite: red = fixed, green = blue = moving, each range-normalized"""
    _check_sizes(fixed, aligned_moving)
    red = rescale(fixed)
    cyan = rescale(aligned_moving)
    return np.stack([red, cyan, cyan], axis=-1)


def overlay_difference(fixed: Raster, aligned_moving: Raster) -> Raster:
    """Absolute difference of the range-normalized images"""
    _check_sizes(fixed, aligned_moving)
    return Raster(np.abs(rescale(fixed) - rescale(aligned_moving)))


def overlay_checkerboard(fixed: Raster, aligned_moving: Raster, tile: int = 32) -> Raster:
    """Alternating tiles, fixed in the top-left tile"""
    _check_sizes(fixed, aligned_moving)
    if tile < MIN_TILE:
        raise ValueError(f"tile must be at least {MIN_TILE} px, got {tile}")
    ys, xs = np.mgrid[0:fixed.height, 0:fixed.width]
    from_fixed = ((xs // tile + ys // tile) % 2) == 0
    return Raster(np.where(from_fixed, fixed.data, aligned_moving.data))
