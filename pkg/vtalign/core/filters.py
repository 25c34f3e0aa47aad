"""
Formatting helpers
Timestamps, numbers and transform summaries for manifests and console output
"""
import math
from datetime import datetime, timezone

from vtalign.models.transforms import PARAM_NAMES, TransformParams

MANIFEST_TIMESTAMP_FORMAT = '%Y-%m-%dT%H:%M:%SZ'


def format_datetime(value=None, format=MANIFEST_TIMESTAMP_FORMAT):
    """
    Format a datetime as UTC text

    Args:
        value: datetime (naive values are taken as UTC) or ISO string; now when None
        format: strftime format string

    Returns:
        Formatted datetime string
    """
    if value is None:
        value = datetime.now(timezone.utc)

    if isinstance(value, str):
        try:
            value = datetime.fromisoformat(value)
        except ValueError:
            return value

    if value.tzinfo is None:
        value = value.replace(tzinfo=timezone.utc)

    return value.astimezone(timezone.utc).strftime(format)


def format_number(value, decimals=4):
    """Format number with specific decimal places"""
    if value is None:
        return "n/a"

    try:
        return f"{float(value):.{decimals}f}"
    except (ValueError, TypeError):
        return str(value)


def format_params(params: TransformParams, decimals=4):
    """One-line parameter summary with the rotation in degrees"""
    parts = []
    for name, value in zip(PARAM_NAMES[params.kind], params.values):
        if name == 'q':
            parts.append(f"q={math.degrees(value):.{decimals}f}deg")
        else:
            parts.append(f"{name}={value:.{decimals}f}")
    return f"{params.kind.value}(" + ", ".join(parts) + ")"
