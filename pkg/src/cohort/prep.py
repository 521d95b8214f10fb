"""
Phenotype preparation and stratified splitting.
"""
import logging
from typing import Sequence, Tuple

import numpy as np
from sklearn.model_selection import train_test_split

from errors import DataError, DimensionError, ParameterError, SplitError
from .data import LabeledCohort

logger = logging.getLogger(__name__)


def dichotomize_proxy(scores, threshold: float = 2.0) -> np.ndarray:
    """Case (1) when the proxy score is at or above ``threshold``, else control (0)."""
    scores = np.asarray(scores, dtype=np.float64).reshape(-1)
    if not np.all(np.isfinite(scores)):
        raise DataError("proxy scores must be finite")
    return (scores >= threshold).astype(np.float64)


def filter_samples(cohort: LabeledCohort, keep, reason: str = "filter") -> LabeledCohort:
    """Keep rows where ``keep`` is true, preserving order."""
    keep = np.asarray(keep, dtype=bool).reshape(-1)
    if keep.shape[0] != cohort.n_samples:
        raise DimensionError(f"{reason}: mask has {keep.shape[0]} rows for {cohort.n_samples} samples")
    removed = int((~keep).sum())
    if removed:
        logger.info(f"{reason}: removed {removed} of {cohort.n_samples} samples")
    return cohort.subset(keep)


def age_filter(cohort: LabeledCohort, min_age: float = 65) -> LabeledCohort:
    """Remove controls younger than ``min_age``; cases are never removed."""
    controls = cohort.controls
    if not controls.any():
        return cohort
    if cohort.age is None:
        raise DataError("age filter needs ages for controls, cohort has none")
    control_ages = cohort.age[controls]
    if np.isnan(control_ages).any():
        first = np.flatnonzero(controls)[np.flatnonzero(np.isnan(control_ages))[0]]
        raise DataError(f"control {cohort.sample_ids[first]} has no age")
    keep = ~controls | (np.nan_to_num(cohort.age, nan=np.inf) >= min_age)
    return filter_samples(cohort, keep, reason=f"age filter (controls >= {min_age})")


def stratified_split(cohort: LabeledCohort, fractions: Sequence[float],
                     seed: int) -> Tuple[LabeledCohort, LabeledCohort, LabeledCohort]:
    """
    Split into (train, validation, test) within each phenotype class.

    The test part is drawn first, then validation from the remainder, both
    stratified on the phenotype. Rows keep their original order inside each
    part.

    Raises:
        ParameterError: fractions are not positive or do not sum to 1
        SplitError: a phenotype class has fewer rows than there are parts
    """
    fractions = tuple(float(f) for f in fractions)
    if len(fractions) != 3 or any(f <= 0 for f in fractions) or abs(sum(fractions) - 1.0) > 1e-9:
        raise ParameterError(f"split fractions must be three positive values summing to 1, got {fractions}")

    y = cohort.y
    values, counts = np.unique(y, return_counts=True)
    for value, count in zip(values, counts):
        if count < len(fractions):
            raise SplitError(f"phenotype class {value:g} has {count} rows, fewer than {len(fractions)} parts")

    n = cohort.n_samples
    n_val, n_test = (max(1, int(round(n * f))) for f in fractions[1:])
    rows = np.arange(n)
    try:
        rest, test = train_test_split(rows, test_size=n_test, random_state=seed, stratify=y)
        train, val = train_test_split(rest, test_size=n_val, random_state=seed, stratify=y[rest])
    except ValueError as e:
        raise SplitError(f"cannot split {n} samples into {fractions}: {e}") from e

    out = tuple(cohort.subset(np.sort(part)) for part in (train, val, test))
    logger.info(f"Split {n} samples into {', '.join(str(p.n_samples) for p in out)}")
    return out
