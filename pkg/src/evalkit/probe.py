"""
Linear probe: how well a representation predicts a categorical label.
"""
import logging
from dataclasses import dataclass

import numpy as np
from sklearn.linear_model import LogisticRegression
from sklearn.model_selection import train_test_split
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import StandardScaler

from errors import DimensionError, ParameterError
from nncore import as_matrix

logger = logging.getLogger(__name__)

PROBE_MAX_ITER = 1000


@dataclass(frozen=True)
class ProbeResult:
    accuracy: float
    chance: float
    n_train: int
    n_test: int


def linear_probe_accuracy(Z, labels, test_fraction: float = 0.3, seed: int = 0) -> ProbeResult:
    """
    Multinomial logistic regression on standardised features, fitted on a
    stratified part of the rows and scored on the rest. ``chance`` is the
    majority-class share of the test rows. Classes with a single row make
    the split unstratified.
    """
    Z = as_matrix(Z, "representation")
    labels = np.asarray(labels, dtype=object).reshape(-1)
    if labels.size != Z.shape[0]:
        raise DimensionError(f"{labels.size} labels for {Z.shape[0]} rows")
    if not 0.0 < test_fraction < 1.0:
        raise ParameterError(f"test_fraction must be in (0, 1), got {test_fraction}")

    classes, codes = np.unique(labels.astype(str), return_inverse=True)
    if classes.size < 2:
        raise ParameterError(f"probe needs at least 2 classes, got {classes.size}")
    n = Z.shape[0]
    n_test = max(1, int(round(n * test_fraction)))
    if n - n_test < 2:
        raise ParameterError(f"probe needs at least 2 training rows, got {n - n_test}")
    stratify = codes if np.bincount(codes).min() >= 2 else None
    try:
        train, test = train_test_split(np.arange(n), test_size=n_test, random_state=seed, stratify=stratify)
    except ValueError as e:
        raise ParameterError(f"cannot split {n} rows for the probe: {e}") from e
    if np.unique(codes[train]).size < 2:
        raise ParameterError("probe training rows hold a single class")

    classifier = make_pipeline(StandardScaler(), LogisticRegression(max_iter=PROBE_MAX_ITER))
    classifier.fit(Z[train], codes[train])
    accuracy = float(np.mean(classifier.predict(Z[test]) == codes[test]))
    chance = float(np.bincount(codes[test], minlength=classes.size).max() / n_test)
    logger.debug(f"Probe accuracy {accuracy:.3f} (chance {chance:.3f}) over {classes.size} classes")
    return ProbeResult(accuracy=accuracy, chance=chance, n_train=train.size, n_test=n_test)
