"""
Rigid-family transforms
Realizes parameter vectors as 3x3 matrices (row-vector convention, translation
in the bottom row) and applies, composes and inverts them
"""
import math
from typing import Optional, Tuple

import numpy as np

from vtalign.exceptions import InvalidParamsError, SingularMatrixError
from vtalign.models.imaging import Raster
from vtalign.models.transforms import TransformMatrix, TransformParams

SINGULAR_TOLERANCE = 1e-15


def translation_matrix(tx: float, ty: float) -> np.ndarray:
    return np.array([[1.0, 0.0, 0.0],
                     [0.0, 1.0, 0.0],
                     [tx, ty, 1.0]])


def scale_matrix(sx: float, sy: float) -> np.ndarray:
    return np.array([[sx, 0.0, 0.0],
                     [0.0, sy, 0.0],
                     [0.0, 0.0, 1.0]])


def shear_matrix(shx: float, shy: float) -> np.ndarray:
    return np.array([[1.0, shy, 0.0],
                     [shx, 1.0, 0.0],
                     [0.0, 0.0, 1.0]])


def rotation_matrix(q: float) -> np.ndarray:
    c, s = math.cos(q), math.sin(q)
    return np.array([[c, s, 0.0],
                     [-s, c, 0.0],
                     [0.0, 0.0, 1.0]])


def image_center(raster: Raster) -> Tuple[float, float]:
    """Pixel-grid center ((W-1)/2, (H-1)/2)"""
    return (raster.width - 1) / 2.0, (raster.height - 1) / 2.0


def to_matrix(params: TransformParams, center: Optional[Tuple[float, float]] = None) -> TransformMatrix:
    """
    Realize transform parameters as Scale . Shear . Rotation . Translation

    Args:
        params: Similarity or affine parameter vector
        center: Rotation/scale center; the origin when omitted.
            A center c is applied by conjugation T(-c) . M . T(c).

    Returns:
        TransformMatrix mapping p to p . M
    """
    sx, sy = params.scales
    if sx <= 0 or sy <= 0:
        raise InvalidParamsError(f"scale must be positive, got sx={sx}, sy={sy}")
    shx, shy = params.shears
    tx, ty = params.translation

    m = (scale_matrix(sx, sy)
         @ shear_matrix(shx, shy)
         @ rotation_matrix(params.rotation)
         @ translation_matrix(tx, ty))

    if center is not None:
        cx, cy = center
        m = translation_matrix(-cx, -cy) @ m @ translation_matrix(cx, cy)

    return TransformMatrix(m)


def apply(matrix: TransformMatrix, point: Tuple[float, float]) -> Tuple[float, float]:
    """Map one point; the result may be non-integer"""
    x, y = point
    m = matrix.m
    return (x * m[0, 0] + y * m[1, 0] + m[2, 0],
            x * m[0, 1] + y * m[1, 1] + m[2, 1])


def apply_points(matrix: TransformMatrix, xs, ys) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorized apply over coordinate arrays of any matching shape"""
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    m = matrix.m
    return (xs * m[0, 0] + ys * m[1, 0] + m[2, 0],
            xs * m[0, 1] + ys * m[1, 1] + m[2, 1])


def compose(a: TransformMatrix, b: TransformMatrix) -> TransformMatrix:
    """Matrix applying a first, then b"""
    return TransformMatrix(a.m @ b.m)


def invert(matrix: TransformMatrix) -> TransformMatrix:
    """Inverse transform; raises SingularMatrixError for a degenerate linear block"""
    det = matrix.determinant
    if abs(det) < SINGULAR_TOLERANCE:
        raise SingularMatrixError(f"transform is singular (det={det:.3e})")
    return TransformMatrix(np.linalg.inv(matrix.m))


def scale_translation(params: TransformParams, factor: float) -> TransformParams:
    """Same transform with the translation multiplied by factor (pyramid level change)"""
    tx, ty = params.translation
    return params.with_translation(tx * factor, ty * factor)
