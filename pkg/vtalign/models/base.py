"""
Shared helpers for the domain models
"""
import dataclasses
from enum import Enum

import numpy as np


def _plain(value):
    """Convert a field value into JSON-friendly Python types"""
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if hasattr(value, 'to_dict'):
        return value.to_dict()
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    return value


class SerializableMixin:
    """Mixin giving dataclass models a to_dict()"""

    def to_dict(self):
        """Convert model to dictionary"""
        return {
            field.name: _plain(getattr(self, field.name))
            for field in dataclasses.fields(self)
        }
