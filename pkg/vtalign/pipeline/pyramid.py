"""
Multi-resolution image pyramids
"""
from typing import List

from vtalign.exceptions import ImageTooSmallError
from vtalign.models.imaging import Raster

MIN_DOWNSAMPLE_SIZE = 8


def pyramid_downsample(r: Raster) -> Raster:
    """Half-resolution image by 2x2 box filtering; odd trailing rows/columns are dropped"""
    if r.width < MIN_DOWNSAMPLE_SIZE or r.height < MIN_DOWNSAMPLE_SIZE:
        raise ImageTooSmallError(
            f"downsampling needs at least {MIN_DOWNSAMPLE_SIZE}x{MIN_DOWNSAMPLE_SIZE}, "
            f"got {r.width}x{r.height}"
        )
    h, w = r.height // 2, r.width // 2
    blocks = r.data[:2 * h, :2 * w].reshape(h, 2, w, 2)
    return Raster(blocks.mean(axis=(1, 3)))


def build_pyramid(r: Raster, levels: int) -> List[Raster]:
    """[full resolution, 1/2, 1/4, ...] with levels + 1 entries"""
    pyramid = [r]
    for _ in range(levels):
        pyramid.append(pyramid_downsample(pyramid[-1]))
    return pyramid
