"""
Cross-modal patch pairs
Square windows around visual corners and the matching thermal windows under
the recovered transform
"""
import logging
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from vtalign.core.geometry import apply
from vtalign.core.raster import save_image
from vtalign.core.resample import InterpolationKind, SplineCoefficients, in_bounds, prefilter, sample
from vtalign.exceptions import NotEnoughCornersError
from vtalign.models.imaging import Raster
from vtalign.models.inspection import Corner, PatchPair
from vtalign.models.transforms import TransformMatrix

logger = logging.getLogger(__name__)

PATCH_SIZE = 32


def _offsets(size: int) -> np.ndarray:
    # -16..15 for a 32 px window
    half = size // 2
    return np.arange(-half, size - half, dtype=np.float64)


def _visual_window(visual: Raster, cx: int, cy: int, size: int) -> Optional[Raster]:
    half = size // 2
    x0, y0 = cx - half, cy - half
    if x0 < 0 or y0 < 0 or x0 + size > visual.width or y0 + size > visual.height:
        return None
    return Raster(visual.data[y0:y0 + size, x0:x0 + size])


def _thermal_window(coeffs: SplineCoefficients, tx: float, ty: float, size: int) -> Optional[Raster]:
    offs = _offsets(size)
    xs = tx + offs[None, :] + np.zeros((size, 1))
    ys = ty + offs[:, None] + np.zeros((1, size))
    if not in_bounds(coeffs.width, coeffs.height, xs, ys).all():
        return None
    values, _ = sample(coeffs, xs, ys, InterpolationKind.CUBIC_SPLINE)
    return Raster(values)


def extract_patch_pairs(visual: Raster, thermal: Raster, m: TransformMatrix,
                        corners: Sequence[Corner], k: int, seed: int,
                        size: int = PATCH_SIZE) -> List[PatchPair]:
    """
    Sample k corners at random and cut the matching patch pairs

    Corners are drawn in a seeded random order; a corner whose window leaves
    either image is skipped and the next candidate is tried.

    Args:
        visual: Visual frame the corners were detected on
        thermal: Thermal frame
        m: Transform taking visual pixel coordinates to thermal ones
        corners: Candidate corners
        k: Number of pairs wanted (>= 1)
        seed: Seed for the corner draw
        size: Patch side in pixels

    Returns:
        k PatchPairs in draw order
    """
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")

    coeffs = prefilter(thermal)
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(corners))

    pairs: List[PatchPair] = []
    for index in order:
        corner = corners[index]
        cx, cy = int(round(corner.x)), int(round(corner.y))
        visual_patch = _visual_window(visual, cx, cy, size)
        if visual_patch is None:
            continue
        tx, ty = apply(m, (float(cx), float(cy)))
        thermal_patch = _thermal_window(coeffs, tx, ty, size)
        if thermal_patch is None:
            continue
        pairs.append(PatchPair(
            visual_patch=visual_patch,
            thermal_patch=thermal_patch,
            visual_center=(cx, cy),
            thermal_center=(tx, ty),
        ))
        if len(pairs) == k:
            break

    if len(pairs) < k:
        raise NotEnoughCornersError(
            f"only {len(pairs)} of {len(corners)} corners give usable {size}x{size} pairs, {k} requested"
        )
    logger.info(f"Extracted {k} patch pairs from {len(corners)} corners")
    return pairs


def save_patch_pairs(pairs: Sequence[PatchPair], out_dir, stem: str) -> List[Path]:
    """Write <stem>_pair<i>_vis.png and <stem>_pair<i>_thm.png for each pair"""
    out_dir = Path(out_dir)
    written = []
    for i, pair in enumerate(pairs):
        for tag, patch in (('vis', pair.visual_patch), ('thm', pair.thermal_patch)):
            path = out_dir / f"{stem}_pair{i}_{tag}.png"
            save_image(patch, path)
            written.append(path)
    return written
