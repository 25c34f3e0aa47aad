"""
Verification artifacts: overlays, corners and patch pairs
"""
from vtalign.inspection.fast import fast_detect, segment_scores
from vtalign.inspection.overlays import (
    overlay_checkerboard, overlay_difference, overlay_redcyan, rescale
)
from vtalign.inspection.patches import extract_patch_pairs, save_patch_pairs

__all__ = [
    'fast_detect', 'segment_scores',
    'overlay_checkerboard', 'overlay_difference', 'overlay_redcyan', 'rescale',
    'extract_patch_pairs', 'save_patch_pairs',
]
