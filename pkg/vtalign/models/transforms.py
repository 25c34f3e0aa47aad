"""
Transform models
Rigid-family parameter vectors and their homogeneous 3x3 realization
"""
import enum
import math
from dataclasses import dataclass
from typing import Any, Dict, Sequence, Tuple

import numpy as np

from vtalign.exceptions import InvalidParamsError


class TransformKind(enum.Enum):
    """Transform family"""
    SIMILARITY = "similarity"
    AFFINE = "affine"


# Allowed round-off in the homogeneous column
THIRD_COLUMN_TOLERANCE = 1e-9

# Parameter names in vector order
PARAM_NAMES = {
    TransformKind.SIMILARITY: ('q', 's', 'tx', 'ty'),
    TransformKind.AFFINE: ('q', 'sx', 'sy', 'shx', 'shy', 'tx', 'ty'),
}

IDENTITY_VALUES = {
    TransformKind.SIMILARITY: (0.0, 1.0, 0.0, 0.0),
    TransformKind.AFFINE: (0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0),
}


@dataclass(frozen=True)
class TransformParams:
    """
    Parameter vector of a similarity or affine transform

    Similarity: [q (radians), s, tx, ty]
    Affine: [q, sx, sy, shx, shy, tx, ty]
    """
    kind: TransformKind
    values: Tuple[float, ...]

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        expected = len(PARAM_NAMES[self.kind])
        if len(values) != expected:
            raise InvalidParamsError(
                f"{self.kind.value} transform needs {expected} values, got {len(values)}"
            )
        if not all(math.isfinite(v) for v in values):
            raise InvalidParamsError(f"non-finite transform parameters {values}")
        object.__setattr__(self, 'values', values)

        sx, sy = self.scales
        if sx <= 0 or sy <= 0:
            raise InvalidParamsError(f"scale must be positive, got sx={sx}, sy={sy}")
        if self.kind is TransformKind.AFFINE:
            shx, shy = self.values[3], self.values[4]
            if shx * shy >= 1.0:
                raise InvalidParamsError(
                    f"shear shx={shx}, shy={shy} makes the transform reflective or singular"
                )

    @classmethod
    def identity(cls, kind=TransformKind.SIMILARITY):
        return cls(kind, IDENTITY_VALUES[kind])

    @classmethod
    def similarity(cls, q=0.0, s=1.0, tx=0.0, ty=0.0):
        return cls(TransformKind.SIMILARITY, (q, s, tx, ty))

    @classmethod
    def affine(cls, q=0.0, sx=1.0, sy=1.0, shx=0.0, shy=0.0, tx=0.0, ty=0.0):
        return cls(TransformKind.AFFINE, (q, sx, sy, shx, shy, tx, ty))

    @property
    def rotation(self) -> float:
        return self.values[0]

    @property
    def scales(self) -> Tuple[float, float]:
        if self.kind is TransformKind.SIMILARITY:
            return self.values[1], self.values[1]
        return self.values[1], self.values[2]

    @property
    def shears(self) -> Tuple[float, float]:
        if self.kind is TransformKind.SIMILARITY:
            return 0.0, 0.0
        return self.values[3], self.values[4]

    @property
    def translation(self) -> Tuple[float, float]:
        return self.values[-2], self.values[-1]

    def with_translation(self, tx: float, ty: float) -> 'TransformParams':
        return TransformParams(self.kind, self.values[:-2] + (tx, ty))

    def as_array(self) -> np.ndarray:
        return np.array(self.values, dtype=np.float64)

    @classmethod
    def from_array(cls, kind: TransformKind, values: Sequence[float]) -> 'TransformParams':
        return cls(kind, tuple(float(v) for v in values))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'kind': self.kind.value,
            'params': list(self.values),
            'names': list(PARAM_NAMES[self.kind]),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'TransformParams':
        return cls(TransformKind(data['kind']), tuple(data['params']))


@dataclass(frozen=True)
class TransformMatrix:
    """
    Homogeneous 3x3 matrix under the row-vector convention p' = p . M

    Translation lives in the bottom row and the third column is [0, 0, 1].
    """
    m: np.ndarray

    def __post_init__(self):
        m = np.array(self.m, dtype=np.float64, copy=True)
        if m.shape != (3, 3):
            raise InvalidParamsError(f"transform matrix must be 3x3, got {m.shape}")
        if not np.all(np.isfinite(m)):
            raise InvalidParamsError("transform matrix has non-finite entries")
        if not np.allclose(m[:, 2], (0.0, 0.0, 1.0), rtol=0.0, atol=THIRD_COLUMN_TOLERANCE):
            raise InvalidParamsError(
                f"transform matrix third column must be [0, 0, 1], got {m[:, 2].tolist()}"
            )
        det = float(np.linalg.det(m[:2, :2]))
        if det <= 0:
            raise InvalidParamsError(
                f"transform matrix is reflective or singular (det={det:.3e})"
            )
        # Round-off from products and inverses
        m[:, 2] = (0.0, 0.0, 1.0)
        m.setflags(write=False)
        object.__setattr__(self, 'm', m)

    @classmethod
    def identity(cls):
        return cls(np.eye(3))

    @property
    def linear(self) -> np.ndarray:
        return self.m[:2, :2]

    @property
    def offset(self) -> np.ndarray:
        return self.m[2, :2]

    @property
    def determinant(self) -> float:
        return float(np.linalg.det(self.linear))

    def to_list(self):
        """Nine numbers, row-major"""
        return [float(v) for v in self.m.ravel()]

    @classmethod
    def from_list(cls, values):
        return cls(np.asarray(values, dtype=np.float64).reshape(3, 3))

    def allclose(self, other: 'TransformMatrix', atol=1e-12) -> bool:
        return bool(np.allclose(self.m, other.m, rtol=0.0, atol=atol))

    def __eq__(self, other):
        if not isinstance(other, TransformMatrix):
            return NotImplemented
        return bool(np.array_equal(self.m, other.m))
