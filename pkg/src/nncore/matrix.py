"""
Dense float64 matrix helpers.

Matrices are plain ``numpy.ndarray`` objects of dtype float64 and two
dimensions; these helpers coerce and validate them at module boundaries.
"""
import numpy as np

from errors import DimensionError, NumericError


def as_matrix(x, name: str = "matrix") -> np.ndarray:
    """Return ``x`` as a 2-D float64 array, promoting vectors to a single row."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {arr.shape}")
    return arr


def as_vector(x, name: str = "vector") -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 2 and 1 in arr.shape:
        arr = arr.reshape(-1)
    if arr.ndim != 1:
        raise DimensionError(f"{name} must be 1-D, got shape {arr.shape}")
    return arr


def require_same_shape(a: np.ndarray, b: np.ndarray, what: str) -> None:
    if a.shape != b.shape:
        raise DimensionError(f"{what}: shape mismatch {a.shape} vs {b.shape}")


def require_cols(x: np.ndarray, cols: int, what: str) -> None:
    if x.ndim != 2 or x.shape[1] != cols:
        raise DimensionError(f"{what}: expected {cols} columns, got shape {x.shape}")


def require_finite(value, what: str) -> None:
    if not np.all(np.isfinite(value)):
        raise NumericError(f"{what} is not finite")
