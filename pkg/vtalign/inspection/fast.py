"""
FAST corner detection
Segment test on the 16-pixel Bresenham circle of radius 3 with 3x3
non-maximum suppression
"""
import logging
from typing import List

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from vtalign.exceptions import ImageTooSmallError
from vtalign.models.imaging import Raster
from vtalign.models.inspection import Corner

logger = logging.getLogger(__name__)

RADIUS = 3
MIN_FAST_SIZE = 7

# (dx, dy) around the circle, clockwise from twelve o'clock
CIRCLE = np.array([
    (0, -3), (1, -3), (2, -2), (3, -1), (3, 0), (3, 1), (2, 2), (1, 3),
    (0, 3), (-1, 3), (-2, 2), (-3, 1), (-3, 0), (-3, -1), (-2, -2), (-1, -3),
])


def _ring(data: np.ndarray) -> np.ndarray:
    """Circle samples for every interior pixel, shape (H-6, W-6, 16)"""
    h, w = data.shape
    return np.stack([
        data[RADIUS + dy:h - RADIUS + dy, RADIUS + dx:w - RADIUS + dx]
        for dx, dy in CIRCLE
    ], axis=-1)


def _arc_windows(values: np.ndarray, n: int) -> np.ndarray:
    """All 16 wrapped arcs of length n along the last axis, shape (..., 16, n)"""
    wrapped = np.concatenate([values, values[..., :n - 1]], axis=-1)
    return sliding_window_view(wrapped, n, axis=-1)


def segment_scores(r: Raster, n: int = 9):
    """
    Segment-test score and longest passing arc for every pixel

    The score is the largest threshold t for which n contiguous circle pixels
    are all brighter than center + t or all darker than center - t; pixels
    within RADIUS of the border score 0.

    Returns:
        (score, arc): arrays of the image shape; arc is the length of the
        longest contiguous run that beats the score's polarity at threshold 0
    """
    data = r.data
    center = data[RADIUS:-RADIUS, RADIUS:-RADIUS][..., None]
    diffs = _ring(data) - center

    bright = _arc_windows(diffs, n).min(axis=-1).max(axis=-1)
    dark = _arc_windows(-diffs, n).min(axis=-1).max(axis=-1)
    score = np.maximum(np.maximum(bright, dark), 0.0)

    # Longest run on the winning side, used to break ties between equal scores
    side = np.where((bright >= dark)[..., None], diffs, -diffs)
    passing = side >= score[..., None]
    arc = np.zeros(score.shape, dtype=np.int64)
    for length in range(n, 17):
        runs = _arc_windows(passing, length).all(axis=-1).any(axis=-1)
        arc = np.where(runs, length, arc)

    full_score = np.zeros(data.shape)
    full_arc = np.zeros(data.shape, dtype=np.int64)
    full_score[RADIUS:-RADIUS, RADIUS:-RADIUS] = score
    full_arc[RADIUS:-RADIUS, RADIUS:-RADIUS] = arc
    return full_score, full_arc


def _neighbors(values: np.ndarray, dy: int, dx: int, fill) -> np.ndarray:
    """values shifted so out[y, x] = values[y + dy, x + dx], padded with fill"""
    padded = np.pad(values, 1, mode='constant', constant_values=fill)
    h, w = values.shape
    return padded[1 + dy:1 + dy + h, 1 + dx:1 + dx + w]


def fast_detect(r: Raster, threshold: float, n: int = 9) -> List[Corner]:
    """
    FAST-n corners with 3x3 non-maximum suppression

    A pixel survives suppression unless a neighbor has a higher score, or the
    same score with a longer passing arc.

    Args:
        r: Image to search
        threshold: Intensity margin of the segment test (> 0)
        n: Required contiguous circle pixels

    Returns:
        Corners in raster order
    """
    if threshold <= 0:
        raise ValueError(f"threshold must be positive, got {threshold}")
    if not 1 <= n <= 16:
        raise ValueError(f"n must be in [1, 16], got {n}")
    if r.width < MIN_FAST_SIZE or r.height < MIN_FAST_SIZE:
        raise ImageTooSmallError(
            f"FAST needs at least {MIN_FAST_SIZE}x{MIN_FAST_SIZE}, got {r.width}x{r.height}"
        )

    score, arc = segment_scores(r, n)
    candidate = score > threshold
    score = np.where(candidate, score, 0.0)
    arc = np.where(candidate, arc, 0)

    keep = candidate.copy()
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            if dy == 0 and dx == 0:
                continue
            ns = _neighbors(score, dy, dx, 0.0)
            na = _neighbors(arc, dy, dx, 0)
            keep &= ~((ns > score) | ((ns == score) & (na > arc)))

    ys, xs = np.nonzero(keep)
    corners = [Corner(y=int(y), x=int(x), score=float(score[y, x])) for y, x in zip(ys, xs)]
    logger.debug(f"FAST-{n}: {int(candidate.sum())} candidates, {len(corners)} after suppression")
    return corners
