"""
Ancestry strata and heterogeneity ordering from ancestry proportions.
"""
from typing import Sequence

import numpy as np

from errors import DimensionError, ParameterError
from .data import MIXED, SUPERPOPULATIONS


def _check_cutoff(cutoff: float) -> None:
    if cutoff < 0.5:
        raise ParameterError(f"ancestry cutoff {cutoff} < 0.5 is ambiguous: two components could pass it")


def ancestry_stratify(proportions, cutoff: float, names: Sequence[str] = SUPERPOPULATIONS) -> str:
    """The component whose proportion is strictly above ``cutoff``, else MIX."""
    _check_cutoff(cutoff)
    row = np.asarray(proportions, dtype=np.float64).reshape(-1)
    if row.shape[0] != len(names):
        raise DimensionError(f"{row.shape[0]} proportions for {len(names)} component names")
    top = int(np.argmax(row))
    return names[top] if row[top] > cutoff else MIXED


def stratify_cohort(proportions, cutoff: float, names: Sequence[str] = SUPERPOPULATIONS) -> np.ndarray:
    """Vectorised ``ancestry_stratify`` over the rows of a proportions matrix."""
    _check_cutoff(cutoff)
    matrix = np.asarray(proportions, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[1] != len(names):
        raise DimensionError(f"proportions shape {matrix.shape} does not match {len(names)} component names")
    top = np.argmax(matrix, axis=1)
    passed = matrix[np.arange(matrix.shape[0]), top] > cutoff
    labels = np.asarray(names, dtype=object)[top]
    return np.where(passed, labels, MIXED).astype(object)


def ancestry_variance(proportions) -> np.ndarray:
    """Population variance (divide by K) of each row's proportions."""
    matrix = np.asarray(proportions, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[1] < 2:
        raise ParameterError(f"heterogeneity needs at least 2 ancestry components, got shape {matrix.shape}")
    return matrix.var(axis=1)


def heterogeneity_order(proportions) -> np.ndarray:
    """Row permutation from most homogeneous (highest variance) to most admixed; ties keep input order."""
    return np.argsort(-ancestry_variance(proportions), kind="stable")
