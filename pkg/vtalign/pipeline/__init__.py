"""
Registration pipeline
Single-pair registration with optional pyramids and the batch runner
"""
from .pyramid import pyramid_downsample, build_pyramid
from .orchestrator import (
    RegistrationOrchestrator, orchestrator, register, batch, align_moving, default_scales
)

__all__ = [
    'pyramid_downsample', 'build_pyramid',
    'RegistrationOrchestrator', 'orchestrator', 'register', 'batch',
    'align_moving', 'default_scales'
]
