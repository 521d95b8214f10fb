"""
Two-model ensemble p_e = alpha * p_z + beta * p_x.
"""
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Tuple, Union

import numpy as np
import yaml

from errors import CheckpointError, DimensionError, NumericError, ParameterError
from evalkit.metrics import auc
from nncore import as_vector, bce_with_logits_grad
from utils import atomic_write_text

logger = logging.getLogger(__name__)

GRID = tuple(round(0.1 * k, 1) for k in range(1, 16))
MODES = ("grid", "gradient")


@dataclass(frozen=True)
class EnsembleWeights:
    alpha: float
    beta: float
    mode: str = "grid"
    val_auc: float = float("nan")
    loss_history: Tuple[float, ...] = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        if not (np.isfinite(self.alpha) and np.isfinite(self.beta)):
            raise NumericError(f"ensemble weights must be finite, got ({self.alpha}, {self.beta})")
        if self.mode not in MODES:
            raise ParameterError(f"unknown ensemble mode: {self.mode}")

    def to_record(self) -> dict:
        return {"alpha": float(self.alpha), "beta": float(self.beta), "mode": self.mode}


def _pair(p_z, p_x) -> Tuple[np.ndarray, np.ndarray]:
    p_z = as_vector(p_z, "p_z")
    p_x = as_vector(p_x, "p_x")
    if p_z.shape != p_x.shape:
        raise DimensionError(f"score lengths differ: {p_z.size} vs {p_x.size}")
    return p_z, p_x


def combine(p_z, p_x, weights: EnsembleWeights) -> np.ndarray:
    p_z, p_x = _pair(p_z, p_x)
    return weights.alpha * p_z + weights.beta * p_x


def fit_grid(p_z, p_x, y_val) -> EnsembleWeights:
    """
    Scan alpha, beta over 0.1..1.5 in steps of 0.1 and keep the first pair
    (alpha ascending, then beta) with the highest validation AUC.
    """
    p_z, p_x = _pair(p_z, p_x)
    best = (-np.inf, GRID[0], GRID[0])
    for alpha in GRID:
        for beta in GRID:
            value = auc(alpha * p_z + beta * p_x, y_val)
            if value > best[0]:
                best = (value, alpha, beta)
    logger.info(f"Grid search: alpha={best[1]}, beta={best[2]}, val_auc={best[0]:.4f}")
    return EnsembleWeights(alpha=best[1], beta=best[2], mode="grid", val_auc=best[0])


def surrogate_loss_and_grad(params: np.ndarray, p_z: np.ndarray, p_x: np.ndarray,
                            y: np.ndarray) -> Tuple[float, np.ndarray]:
    """
    Mean logistic loss of sigmoid(alpha * p_z + beta * p_x) against ``y``.

    ``params`` is (alpha, beta); the logit has no intercept, so the fitted
    pair is exactly the one the ensemble applies. Returns the loss and its
    gradient in the same order.
    """
    alpha, beta = params
    loss, grad_logit = bce_with_logits_grad(alpha * p_z + beta * p_x, y)
    return loss, np.array([grad_logit @ p_z, grad_logit @ p_x])


def fit_gradient(p_z, p_x, y_val, init: Tuple[float, float] = (1.1, 0.9), epochs: int = 5000,
                 lr: float = 0.01) -> EnsembleWeights:
    """Full-batch gradient descent on the logistic surrogate, starting from ``init``."""
    p_z, p_x = _pair(p_z, p_x)
    y = as_vector(y_val, "labels")
    auc(p_z, y)  # rejects single-class labels before any work
    params = np.array(init, dtype=np.float64)
    history = []
    for epoch in range(1, epochs + 1):
        loss, grad = surrogate_loss_and_grad(params, p_z, p_x, y)
        if not (np.isfinite(loss) and np.all(np.isfinite(grad))):
            raise NumericError(f"ensemble surrogate is not finite at epoch {epoch}")
        history.append(loss)
        params -= lr * grad
    alpha, beta = params
    value = auc(alpha * p_z + beta * p_x, y)
    logger.info(f"Gradient search: alpha={alpha:.4f}, beta={beta:.4f}, val_auc={value:.4f}, "
                f"surrogate {history[0]:.5f} -> {history[-1]:.5f}")
    return EnsembleWeights(alpha=float(alpha), beta=float(beta), mode="gradient", val_auc=value,
                           loss_history=tuple(history))


def save_weights(weights: EnsembleWeights, path: Union[str, Path]) -> Path:
    return atomic_write_text(path, yaml.safe_dump(weights.to_record(), sort_keys=False))


def weights_from_record(record: dict) -> EnsembleWeights:
    try:
        return EnsembleWeights(alpha=float(record["alpha"]), beta=float(record["beta"]), mode=record["mode"])
    except (KeyError, TypeError, ValueError) as e:
        raise CheckpointError(f"invalid ensemble weights record: {e}") from e


def load_weights(path: Union[str, Path]) -> EnsembleWeights:
    try:
        with open(path, encoding="utf-8") as f:
            record = yaml.safe_load(f)
    except (OSError, yaml.YAMLError) as e:
        raise CheckpointError(f"cannot read ensemble weights {path}: {e}") from e
    if not isinstance(record, dict):
        raise CheckpointError(f"{path}: not an ensemble weights record")
    return weights_from_record(record)
