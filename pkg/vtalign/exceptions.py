"""
Exception hierarchy for the alignment toolkit
"""


class VtalignError(Exception):
    """Base class for every error raised by the toolkit"""


class ImageIoError(VtalignError):
    """An image file is missing, unreadable or cannot be written"""

    def __init__(self, path, reason):
        self.path = str(path)
        self.reason = reason
        super().__init__(f"{self.path}: {reason}")


class ImageFormatError(VtalignError):
    """An image file uses an encoding the toolkit does not decode"""

    def __init__(self, path, reason):
        self.path = str(path)
        self.reason = reason
        super().__init__(f"{self.path}: {reason}")


class ImageTooSmallError(VtalignError):
    """An image is below the minimum size an operation needs"""


class SizeMismatchError(VtalignError):
    """Two images that must share dimensions do not"""


class InvalidParamsError(VtalignError):
    """Transform parameters violate their invariants"""


class SingularMatrixError(VtalignError):
    """A transform matrix cannot be inverted"""


class RegistrationError(VtalignError):
    """Base class for failures of the registration process"""


class CostEvaluationError(RegistrationError):
    """A cost function could not be evaluated for a candidate"""


class InsufficientOverlapError(CostEvaluationError):
    """Too few fixed-image samples map inside the moving image"""

    def __init__(self, contributing, selected, min_fraction):
        self.contributing = contributing
        self.selected = selected
        self.min_fraction = min_fraction
        super().__init__(
            f"only {contributing}/{selected} samples overlap "
            f"(minimum fraction {min_fraction})"
        )


class InvalidStartError(RegistrationError):
    """The optimizer's starting point has no defined cost"""


class NoPairsFoundError(RegistrationError):
    """A batch directory holds no visual/thermal pair"""


class NotEnoughCornersError(VtalignError):
    """Fewer usable corners than requested patch pairs"""


class ManifestError(VtalignError):
    """A registration manifest is missing, malformed or records no transform"""

    def __init__(self, path, reason):
        self.path = str(path)
        self.reason = reason
        super().__init__(f"{self.path}: {reason}")
