"""
Raster I/O and intensity statistics
Decodes PGM/PNG frames into Rasters, writes 8-bit outputs, bins intensities
"""
import os
import logging
import tempfile
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from vtalign.exceptions import ImageFormatError, ImageIoError
from vtalign.models.imaging import Histogram, IntensityStats, Raster

logger = logging.getLogger(__name__)

# Rec.601 luma weights
LUMA_WEIGHTS = np.array([0.299, 0.587, 0.114])

# Pillow reports PGM/PPM files as "PPM"
READABLE_FORMATS = {'PNG', 'PPM'}
WRITE_FORMATS = {'.png': 'PNG', '.pgm': 'PPM', '.pnm': 'PPM'}


def load_image(path) -> Raster:
    """
    Decode a PGM (P2/P5) or 8/16-bit grayscale-or-RGB PNG

    Args:
        path: Image file path

    Returns:
        Raster with intensities as floats; RGB is reduced to Rec.601 luma
    """
    path = Path(path)
    if not path.is_file():
        raise ImageIoError(path, 'file does not exist')

    try:
        with Image.open(path) as img:
            img.load()
            if img.format not in READABLE_FORMATS:
                raise ImageFormatError(path, f'unsupported format {img.format}')
            data = _to_intensity(img, path)
    except UnidentifiedImageError as e:
        raise ImageFormatError(path, f'unrecognized encoding ({e})') from e
    except (ImageFormatError, ImageIoError):
        raise
    except OSError as e:
        raise ImageIoError(path, f'cannot read ({e})') from e

    logger.debug(f"Loaded {path} ({data.shape[1]}x{data.shape[0]})")
    return Raster(data)


def _to_intensity(img, path) -> np.ndarray:
    """Pixel array of a decoded image as float64 intensities"""
    mode = img.mode
    if mode in ('L', 'I', 'I;16', 'I;16B', 'I;16L'):
        return np.asarray(img).astype(np.float64)
    if mode in ('LA', 'P', 'PA', 'RGBA'):
        img = img.convert('RGB' if mode != 'LA' else 'L')
        return _to_intensity(img, path)
    if mode == 'RGB':
        rgb = np.asarray(img).astype(np.float64)
        return rgb @ LUMA_WEIGHTS
    raise ImageFormatError(path, f'unsupported pixel mode {mode}')


def to_uint8(data) -> np.ndarray:
    """Clamp to [0, 255] and round half up"""
    clamped = np.clip(np.asarray(data, dtype=np.float64), 0.0, 255.0)
    return np.floor(clamped + 0.5).astype(np.uint8)


def save_image(raster: Raster, path) -> None:
    """
    Write an 8-bit grayscale PNG or PGM, chosen by extension

    Args:
        raster: Image to write; values are clamped to [0, 255] and rounded half up
        path: Destination (.png, .pgm or .pnm)
    """
    _write(Image.fromarray(to_uint8(raster.data)), Path(path))


def save_color_image(rgb, path) -> None:
    """Write an H x W x 3 array as an 8-bit RGB PNG"""
    rgb = np.asarray(rgb)
    if rgb.ndim != 3 or rgb.shape[2] != 3:
        raise ValueError(f"color image needs shape (H, W, 3), got {rgb.shape}")
    path = Path(path)
    if path.suffix.lower() != '.png':
        raise ImageFormatError(path, 'color images are written as PNG only')
    _write(Image.fromarray(to_uint8(rgb)), path)


def _write(img, path: Path) -> None:
    """Write atomically through a temporary file in the destination directory"""
    fmt = WRITE_FORMATS.get(path.suffix.lower())
    if fmt is None:
        raise ImageFormatError(path, f'cannot write extension {path.suffix!r}')

    tmp_name = None
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f'.{path.name}.', suffix='.tmp')
        with os.fdopen(fd, 'wb') as handle:
            img.save(handle, format=fmt)
        os.replace(tmp_name, path)
    except OSError as e:
        if tmp_name and os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise ImageIoError(path, f'cannot write ({e})') from e

    logger.debug(f"Wrote {path}")


def intensity_stats(raster: Raster, bin_count: int) -> IntensityStats:
    """
    Intensity range and bin width for a given number of bins

    A constant image gets bin width 1.
    """
    if bin_count < 2:
        raise ValueError(f"bin_count must be >= 2, got {bin_count}")

    lo = float(raster.data.min())
    hi = float(raster.data.max())
    bin_width = (hi - lo) / bin_count if hi > lo else 1.0
    return IntensityStats(min=lo, max=hi, bin_width=bin_width)


def bin_index(values, stats: IntensityStats, bin_count: int) -> np.ndarray:
    """Hard bin assignment floor((v - min) / binWidth), clamped to the valid range"""
    index = np.floor((np.asarray(values, dtype=np.float64) - stats.min) / stats.bin_width)
    return np.clip(index, 0, bin_count - 1).astype(np.int64)


def histogram(raster: Raster, bin_count: int) -> Histogram:
    """Display histogram with hard bin assignment"""
    stats = intensity_stats(raster, bin_count)
    counts = np.bincount(bin_index(raster.data.ravel(), stats, bin_count), minlength=bin_count)
    return Histogram(bin_count=bin_count, counts=counts, range=stats)


def write_histogram_csv(hist: Histogram, path) -> None:
    """Write a histogram as bin,count rows"""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        hist.to_frame().to_csv(path, index=False)
    except OSError as e:
        raise ImageIoError(path, f'cannot write ({e})') from e
