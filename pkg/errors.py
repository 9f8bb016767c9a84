"""
Error Types - errors.py

Every failure raised by the library carries a short machine-parsable
category so the CLI can report it as a single line:

    error[degenerate_egop]: EGOP estimate is the zero matrix
"""


class TrimError(Exception):
    """Base class for all library errors."""

    category = "internal"

    def one_line(self) -> str:
        message = " ".join(str(self).split())
        return f"error[{self.category}]: {message}"


class ConfigError(TrimError, ValueError):
    category = "config"


class DimensionMismatch(TrimError, ValueError):
    category = "dimension"


class DatasetError(TrimError, ValueError):
    category = "dataset"


class DegenerateEgop(TrimError, ArithmeticError):
    """The EGOP estimate is the zero matrix, so no transform can be normalized from it."""

    category = "degenerate_egop"


class RankDeficientBasis(TrimError, ValueError):
    category = "rank"


class ModelFormatError(TrimError, ValueError):
    category = "model_format"


class CrossValidationError(TrimError, ValueError):
    category = "cv"
