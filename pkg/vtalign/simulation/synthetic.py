"""
Synthetic ground-truth pairs
Generates structured test scenes and pseudo-thermal counterparts related to
them by a known transform
"""
import logging

import numpy as np
from scipy.ndimage import gaussian_filter

from vtalign.core.geometry import image_center, invert, to_matrix
from vtalign.core.resample import warp
from vtalign.exceptions import ImageTooSmallError
from vtalign.models.imaging import Raster
from vtalign.models.inspection import SyntheticPair
from vtalign.models.transforms import TransformParams

logger = logging.getLogger(__name__)

MIN_SYNTH_SIZE = 64
INTENSITY_MAX = 255.0


def structured_scene(width: int = 256, height: int = 256, seed: int = 0,
                     shapes: int = 14, smoothing: float = 1.5) -> Raster:
    """
    Deterministic piecewise-smooth test scene in [0, 255]

    A shallow background ramp with randomly placed rectangles and ellipses,
    lightly blurred so intensities vary continuously across edges.

    Args:
        width, height: Scene size
        seed: Generator seed
        shapes: Number of rectangles plus ellipses
        smoothing: Gaussian blur sigma in px (0 disables)

    Returns:
        Raster of the scene
    """
    rng = np.random.default_rng(seed)
    ys, xs = np.mgrid[0:height, 0:width].astype(np.float64)

    angle = rng.uniform(0.0, 2.0 * np.pi)
    ramp = np.cos(angle) * xs / max(width - 1, 1) + np.sin(angle) * ys / max(height - 1, 1)
    scene = 40.0 + 30.0 * (ramp - ramp.min())

    for i in range(shapes):
        level = rng.uniform(20.0, 235.0)
        cx, cy = rng.uniform(0, width), rng.uniform(0, height)
        rx = rng.uniform(0.05, 0.2) * width
        ry = rng.uniform(0.05, 0.2) * height
        if i % 2 == 0:
            inside = (np.abs(xs - cx) <= rx) & (np.abs(ys - cy) <= ry)
        else:
            inside = ((xs - cx) / rx) ** 2 + ((ys - cy) / ry) ** 2 <= 1.0
        scene = np.where(inside, level, scene)

    if smoothing > 0:
        scene = gaussian_filter(scene, sigma=smoothing, mode='nearest')
    return Raster(np.clip(scene, 0.0, INTENSITY_MAX))


def gamma_remap(values, gamma: float) -> np.ndarray:
    """Monotone intensity remap v -> 255 * (v / 255) ** gamma"""
    values = np.maximum(np.asarray(values, dtype=np.float64), 0.0)
    return INTENSITY_MAX * (values / INTENSITY_MAX) ** gamma


def synth_pair(source: Raster, true_params: TransformParams, gamma: float = 1.0,
               noise_sigma: float = 0.0, blur_sigma: float = 0.0, seed: int = 0) -> SyntheticPair:
    """
    Build a visual / pseudo-thermal pair with a known alignment

    The pseudo-thermal frame is the source resampled through the inverse of
    the truth transform (about the image center), gamma remapped, blurred and
    given additive Gaussian noise, in that order. Registering the pair
    recovers true_params.

    Args:
        source: Visual frame, at least 64x64
        true_params: Transform relating the two frames
        gamma: Remap exponent (> 0)
        noise_sigma: Standard deviation of the additive noise
        blur_sigma: Gaussian blur sigma in px
        seed: Noise generator seed

    Returns:
        SyntheticPair; valid_mask marks thermal pixels that sampled inside the source
    """
    if source.width < MIN_SYNTH_SIZE or source.height < MIN_SYNTH_SIZE:
        raise ImageTooSmallError(
            f"synthetic pairs need at least {MIN_SYNTH_SIZE}x{MIN_SYNTH_SIZE}, "
            f"got {source.width}x{source.height}"
        )
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    if noise_sigma < 0 or blur_sigma < 0:
        raise ValueError(f"noise and blur sigmas must be non-negative, got {noise_sigma}, {blur_sigma}")

    m = invert(to_matrix(true_params, image_center(source)))
    warped, valid = warp(source, m, source.width, source.height)

    data = gamma_remap(warped.data, gamma)
    if blur_sigma > 0:
        data = gaussian_filter(data, sigma=blur_sigma, mode='nearest')
    if noise_sigma > 0:
        rng = np.random.default_rng(seed)
        data = data + rng.normal(0.0, noise_sigma, size=data.shape)

    logger.debug(
        f"Synthetic pair {source.width}x{source.height}: gamma={gamma}, "
        f"noise={noise_sigma}, blur={blur_sigma}, {int(valid.sum())} valid px"
    )
    return SyntheticPair(visual=source, thermal=Raster(data), truth=true_params, valid_mask=valid)
