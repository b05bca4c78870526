"""Exception hierarchy shared by every module."""


class InpaintError(Exception):
    """Base class for all errors raised by this package."""


class DecodeError(InpaintError, ValueError):
    """Malformed or unsupported image payload."""


class ShapeMismatchError(InpaintError, ValueError):
    def __init__(self, what, shape_a, shape_b):
        self.shape_a = tuple(shape_a)
        self.shape_b = tuple(shape_b)
        super().__init__(
            f"{what}: shape {self.shape_a[0]}x{self.shape_a[1]} "
            f"does not match {self.shape_b[0]}x{self.shape_b[1]} (rows x cols)"
        )


class ParameterError(InpaintError, ValueError):
    """A hyperparameter or argument violates its documented range."""


class EmptyTrainingSetError(InpaintError):
    """The radial band around the damage contains no known pixels."""


class TrainingError(InpaintError):
    """A regressor could not be fitted (e.g. singular LS-SVM system)."""


class UnfillableError(InpaintError):
    """No known pixels are left to learn from."""


class MaskGenerationError(InpaintError):
    """A mask spec could not be placed within the image."""
