"""
Reconstruction and logistic losses with their gradients.
"""
from typing import Tuple

import numpy as np

from errors import LabelError
from .matrix import as_matrix, as_vector, require_same_shape


def mse(x, x_hat) -> float:
    """Mean over all entries of (x - x_hat)^2."""
    x = as_matrix(x, "x")
    x_hat = as_matrix(x_hat, "x_hat")
    require_same_shape(x, x_hat, "mse")
    return float(np.mean((x - x_hat) ** 2))


def mse_grad(x, x_hat) -> Tuple[float, np.ndarray]:
    """Return mse and its gradient with respect to ``x_hat``."""
    x = as_matrix(x, "x")
    x_hat = as_matrix(x_hat, "x_hat")
    require_same_shape(x, x_hat, "mse")
    diff = x_hat - x
    return float(np.mean(diff ** 2)), 2.0 * diff / diff.size


def _check_binary(y: np.ndarray) -> None:
    if not np.all((y == 0.0) | (y == 1.0)):
        raise LabelError("labels must be 0 or 1")


def bce_with_logits(logit, y) -> float:
    """Mean logistic loss, evaluated as softplus so large logits never overflow."""
    return bce_with_logits_grad(logit, y)[0]


def bce_with_logits_grad(logit, y) -> Tuple[float, np.ndarray]:
    """Return the mean logistic loss and its gradient with respect to the logits."""
    logit = as_vector(logit, "logit")
    y = as_vector(y, "labels")
    require_same_shape(logit, y, "bce_with_logits")
    _check_binary(y)
    # softplus(-l) for y=1, softplus(l) for y=0
    signed = np.where(y == 1.0, -logit, logit)
    loss = np.logaddexp(0.0, signed)
    prob = 0.5 * (1.0 + np.tanh(0.5 * logit))
    return float(loss.mean()), (prob - y) / logit.size
