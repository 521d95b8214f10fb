"""
Exception hierarchy shared by every package.

Each error carries the process exit code the command line maps it to and a
short ``kind`` tag used in the one-line stderr report.
"""


class DispredError(Exception):
    """Base class for all expected failures."""
    exit_code = 1
    kind = "error"


class UsageError(DispredError, ValueError):
    """Bad command line or missing arguments."""
    exit_code = 1
    kind = "usage"


class ParameterError(DispredError, ValueError):
    """A numeric parameter is outside its valid range."""
    exit_code = 1
    kind = "parameter"


class DataError(DispredError, ValueError):
    """Malformed, inconsistent or out-of-range input data."""
    exit_code = 2
    kind = "data"


class DimensionError(DataError):
    kind = "dimension"


class LabelError(DataError):
    kind = "label"


class RangeError(DataError):
    kind = "range"


class MissingVariantError(DataError):
    """Variants referenced by a weight table are absent from the genotypes."""
    kind = "missing-variant"

    def __init__(self, variant_ids):
        self.variant_ids = list(variant_ids)
        shown = ", ".join(self.variant_ids[:20])
        more = f" (+{len(self.variant_ids) - 20} more)" if len(self.variant_ids) > 20 else ""
        super().__init__(f"{len(self.variant_ids)} variant(s) missing from genotypes: {shown}{more}")


class UndefinedAucError(DataError):
    kind = "undefined-auc"


class SplitError(DataError):
    kind = "split"


class ConfigError(DataError):
    kind = "config"


class CheckpointError(DataError):
    kind = "checkpoint"


class VersionError(CheckpointError):
    kind = "version"


class NumericError(DispredError, ArithmeticError):
    """Training or optimization produced a non-finite value."""
    exit_code = 3
    kind = "numeric"
