"""
Mattes mutual information
Parzen-window joint distribution of visual (fixed) and thermal (moving)
intensities and the negative-MI cost minimized by the optimizer
"""
import logging
from typing import Optional, Tuple

import numpy as np

from vtalign.core.geometry import apply_points, image_center, to_matrix
from vtalign.core.raster import intensity_stats
from vtalign.core.resample import SplineCoefficients, beta3, sample
from vtalign.exceptions import InsufficientOverlapError
from vtalign.models.imaging import IntensityStats, Raster
from vtalign.models.registration import JointHistogram, MetricConfig, MetricSamples
from vtalign.models.transforms import TransformMatrix, TransformParams

logger = logging.getLogger(__name__)

# Thermal taps per sample: beta3 is nonzero on at most four integer offsets
CUBIC_TAPS = 4


def select_samples(fixed: Raster, cfg: MetricConfig) -> Tuple[np.ndarray, np.ndarray]:
    """
    Fixed-image pixel coordinates used by the metric

    All pixels by default; a seeded uniform subset (raster order) when
    sampling_fraction < 1.
    """
    ys, xs = np.divmod(np.arange(fixed.width * fixed.height), fixed.width)
    if cfg.sampling_fraction < 1.0:
        count = max(1, int(round(cfg.sampling_fraction * xs.size)))
        rng = np.random.default_rng(cfg.sample_seed)
        chosen = np.sort(rng.choice(xs.size, size=count, replace=False))
        xs, ys = xs[chosen], ys[chosen]
    return xs.astype(np.float64), ys.astype(np.float64)


def collect_samples(fixed: Raster, moving_coeffs: SplineCoefficients, m: TransformMatrix,
                    cfg: MetricConfig) -> MetricSamples:
    """Pair each selected fixed pixel with the moving intensity at g(x)"""
    xs, ys = select_samples(fixed, cfg)
    mx, my = apply_points(m, xs, ys)
    moving, valid = sample(moving_coeffs, mx, my)
    fixed_values = fixed.data[ys.astype(np.int64), xs.astype(np.int64)]
    return MetricSamples(
        fixed_coords=np.column_stack([xs, ys]),
        fixed_intensity=fixed_values,
        moving_intensity=moving,
        valid=valid
    )


def visual_bins(values, stats: IntensityStats, bin_count: int) -> np.ndarray:
    """
    Visual bin kappa with beta0(kappa - u) = 1, u the normalized intensity

    u is clamped to [0, bin_count - 1] so the maximum intensity lands in the last bin.
    """
    u = np.clip((values - stats.min) / stats.bin_width, 0.0, bin_count - 1)
    return np.ceil(u - 0.5).astype(np.int64)


def thermal_coordinates(values, stats: IntensityStats, bin_count: int) -> np.ndarray:
    """Normalized thermal bin coordinate, clamped so all beta3 taps stay in range"""
    v = (values - stats.min) / stats.bin_width
    return np.clip(v, 1.0, bin_count - 2.0)


def build_joint(fixed: Raster, moving_coeffs: SplineCoefficients, m: TransformMatrix,
                cfg: MetricConfig, stats_v: IntensityStats, stats_t: IntensityStats) -> JointHistogram:
    """
    Parzen-window joint histogram p(iota, kappa)

    Each in-bounds sample deposits beta0(kappa - u) * beta3(iota - v) into the
    single visual bin kappa and the four thermal bins around v; the result is
    normalized by the total deposited weight.

    Raises:
        InsufficientOverlapError: fewer than min_valid_fraction of the selected
            samples map inside the moving image
    """
    bins = cfg.bin_count
    samples = collect_samples(fixed, moving_coeffs, m, cfg)
    selected, contributing = samples.selected, samples.contributing

    if contributing == 0 or contributing < cfg.min_valid_fraction * selected:
        raise InsufficientOverlapError(contributing, selected, cfg.min_valid_fraction)

    kappa = visual_bins(samples.fixed_intensity[samples.valid], stats_v, bins)
    v = thermal_coordinates(samples.moving_intensity[samples.valid], stats_t, bins)

    first_tap = np.clip(np.floor(v).astype(np.int64) - 1, 0, bins - CUBIC_TAPS)
    iota = first_tap[:, None] + np.arange(CUBIC_TAPS)[None, :]
    weights = beta3(iota - v[:, None])

    flat = (iota * bins + kappa[:, None]).ravel()
    joint = np.bincount(flat, weights=weights.ravel(), minlength=bins * bins).reshape(bins, bins)
    joint /= joint.sum()

    return JointHistogram(
        bin_count=bins,
        joint=joint,
        marginal_t=marginal_t(joint),
        marginal_v=marginal_v(joint),
        contributing_samples=contributing,
        selected_samples=selected
    )


def marginal_t(j) -> np.ndarray:
    """Thermal marginal: row sums of the joint"""
    joint = j.joint if isinstance(j, JointHistogram) else np.asarray(j)
    return joint.sum(axis=1)


def marginal_v(j) -> np.ndarray:
    """Visual marginal: column sums of the joint"""
    joint = j.joint if isinstance(j, JointHistogram) else np.asarray(j)
    return joint.sum(axis=0)


def entropy(p) -> float:
    """Shannon entropy in nats, with 0 log 0 = 0"""
    p = np.asarray(p, dtype=np.float64)
    nz = p[p > 0]
    return float(-(nz * np.log(nz)).sum())


def mutual_information(j: JointHistogram) -> float:
    """
    Sum of p log(p / (pT pV)) over cells with p > 0 and pT pV > 0, in nats

    Exactly 0 when either marginal is concentrated in a single bin.
    """
    if np.count_nonzero(j.marginal_t) <= 1 or np.count_nonzero(j.marginal_v) <= 1:
        return 0.0
    joint = j.joint
    outer = np.outer(j.marginal_t, j.marginal_v)
    mask = (joint > 0) & (outer > 0)
    p = joint[mask]
    mi = float((p * np.log(p / outer[mask])).sum())
    # MI is nonnegative; clip round-off around zero
    return max(mi, 0.0)


def mi_cost(j: JointHistogram) -> float:
    """Negative mutual information; lower is better"""
    return -mutual_information(j)


def evaluate(fixed: Raster, moving_coeffs: SplineCoefficients, params: TransformParams,
             cfg: MetricConfig, stats_v: IntensityStats, stats_t: IntensityStats,
             center: Optional[Tuple[float, float]] = None) -> float:
    """
    Cost of a candidate transform

    The transform is realized about the fixed image center unless another
    center is given. InsufficientOverlapError propagates to the caller.
    """
    if center is None:
        center = image_center(fixed)
    m = to_matrix(params, center)
    return mi_cost(build_joint(fixed, moving_coeffs, m, cfg, stats_v, stats_t))


def intensity_stats_for(raster: Raster, cfg: MetricConfig) -> IntensityStats:
    """Intensity range and bin width at the metric's bin count"""
    return intensity_stats(raster, cfg.bin_count)
