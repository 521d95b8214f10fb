"""
Least-squares linear head.
"""
import logging
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Union

import numpy as np
import yaml
from scipy import linalg

from errors import CheckpointError, DimensionError, ParameterError
from nncore import as_matrix, as_vector, require_finite
from utils import atomic_write_text
from .base import LATENT, RAW, ROLES, Predictor

logger = logging.getLogger(__name__)

JITTER_SCALE = 1e-8


@dataclass
class LinearModel(Predictor):
    coefficients: np.ndarray
    intercept: float
    role: str = LATENT
    feature_names: Optional[List[str]] = None

    def __post_init__(self):
        self.coefficients = as_vector(self.coefficients, "coefficients")
        self.intercept = float(self.intercept)
        if self.role not in ROLES:
            raise ParameterError(f"unknown feature role: {self.role}")
        if self.feature_names is not None:
            self.feature_names = [str(n) for n in self.feature_names]
            if len(self.feature_names) != self.coefficients.size:
                raise DimensionError(
                    f"{len(self.feature_names)} feature names for {self.coefficients.size} coefficients")

    @property
    def n_features(self) -> int:
        return self.coefficients.size

    def score(self, X: np.ndarray) -> np.ndarray:
        return X @ self.coefficients + self.intercept


def _solve_gram(gram: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Cholesky solve; a singular or ill-conditioned Gram matrix gets a small ridge."""
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("error", linalg.LinAlgWarning)
            return linalg.solve(gram, rhs, assume_a="pos")
    except (linalg.LinAlgError, linalg.LinAlgWarning):
        trace = float(np.trace(gram))
        if trace <= 0.0:
            return np.zeros_like(rhs)
        jitter = JITTER_SCALE * trace / gram.shape[0]
        logger.warning(f"Gram matrix is singular, adding ridge jitter {jitter:.3e}")
        return linalg.solve(gram + jitter * np.eye(gram.shape[0]), rhs, assume_a="pos")


def fit_linear_head(Z, y, role: str = LATENT, feature_names: Optional[List[str]] = None) -> LinearModel:
    """Ordinary least squares with an unpenalised intercept; predictions are raw scores."""
    Z = as_matrix(Z, "features")
    y = as_vector(y, "targets")
    if Z.shape[0] != y.shape[0]:
        raise DimensionError(f"{Z.shape[0]} feature rows for {y.shape[0]} targets")
    require_finite(Z, "features")
    z_mean = Z.mean(axis=0)
    y_mean = y.mean()
    Zc = Z - z_mean
    coefficients = _solve_gram(Zc.T @ Zc, Zc.T @ (y - y_mean))
    return LinearModel(coefficients, y_mean - z_mean @ coefficients, role, feature_names)


def linear_model_record(model: LinearModel, kind: str = "linear", **extra) -> dict:
    record = {
        "kind": kind,
        "role": model.role,
        "intercept": float(model.intercept),
        "coefficients": [float(c) for c in model.coefficients],
    }
    if model.feature_names is not None:
        record["feature_names"] = list(model.feature_names)
    record.update(extra)
    return record


def save_linear_model(model: LinearModel, path: Union[str, Path], kind: str = "linear", **extra) -> Path:
    """Write the model as YAML; floats round-trip exactly."""
    text = yaml.safe_dump(linear_model_record(model, kind, **extra), sort_keys=False)
    return atomic_write_text(path, text)


def linear_model_from_record(record: dict) -> LinearModel:
    try:
        return LinearModel(
            coefficients=np.asarray(record["coefficients"], dtype=np.float64),
            intercept=record["intercept"],
            role=record.get("role", RAW),
            feature_names=record.get("feature_names"),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise CheckpointError(f"invalid linear model record: {e}") from e


def load_linear_model(path: Union[str, Path]) -> LinearModel:
    try:
        with open(path, encoding="utf-8") as f:
            record = yaml.safe_load(f)
    except (OSError, yaml.YAMLError) as e:
        raise CheckpointError(f"cannot read linear model {path}: {e}") from e
    if not isinstance(record, dict):
        raise CheckpointError(f"{path}: not a model record")
    return linear_model_from_record(record)
