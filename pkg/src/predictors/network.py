"""
Supervised feed-forward network baseline.
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from errors import DimensionError, NumericError
from nncore import (
    MLP,
    AdamState,
    LayerSpec,
    RngStream,
    adam_step,
    as_matrix,
    as_vector,
    bce_with_logits_grad,
    require_finite,
)
from .base import RAW, Predictor

logger = logging.getLogger(__name__)


def nn_specs(input_dim: int, dropout: float = 0.5) -> List[LayerSpec]:
    return [
        LayerSpec("fc1", input_dim, 200),
        LayerSpec("fc2", 200, 100),
        LayerSpec("fc3", 100, 20, dropout_p=dropout),
        LayerSpec("fc4", 20, 20, dropout_p=dropout),
        LayerSpec("fc5", 20, 1, activation="identity"),
    ]


@dataclass
class NNModel(Predictor):
    network: MLP
    role: str = RAW
    feature_names: Optional[List[str]] = None

    @property
    def n_features(self) -> int:
        return self.network.in_dim

    def score(self, X: np.ndarray) -> np.ndarray:
        """Raw logits with dropout off."""
        return self.network.predict(X)[:, 0]


def logistic_loss_and_grad(network: MLP, X: np.ndarray, y: np.ndarray, train: bool = False,
                           rng: Optional[RngStream] = None) -> Tuple[float, Dict[str, np.ndarray]]:
    logits, caches = network.forward(X, train=train, rng=rng)
    loss, grad_logits = bce_with_logits_grad(logits[:, 0], y)
    grads, _ = network.backward(caches, grad_logits[:, None])
    return loss, grads


def iterate_batches(order: np.ndarray, batch_size: int):
    for start in range(0, order.size, batch_size):
        yield order[start:start + batch_size]


def fit_nn(X, y, epochs: int = 200, lr: float = 5e-3, batch_size: int = 64, seed: int = 0,
           dropout: float = 0.5, feature_names: Optional[List[str]] = None) -> Tuple[NNModel, List[float]]:
    """
    Train the network with the logistic loss and Adam.

    Returns the model and the mean training loss of every epoch.
    """
    X = as_matrix(X, "X")
    y = as_vector(y, "y")
    if X.shape[0] != y.shape[0]:
        raise DimensionError(f"{X.shape[0]} rows for {y.shape[0]} labels")
    require_finite(X, "network inputs")

    init_rng, shuffle_rng, dropout_rng = RngStream(seed).spawn(3)
    network = MLP.build(nn_specs(X.shape[1], dropout), init_rng)
    params = network.parameters()
    state = AdamState.for_params(params, lr=lr)
    losses = []
    for epoch in range(1, epochs + 1):
        total = 0.0
        for idx in iterate_batches(shuffle_rng.permutation(X.shape[0]), batch_size):
            loss, grads = logistic_loss_and_grad(network, X[idx], y[idx], train=True, rng=dropout_rng)
            if not np.isfinite(loss):
                raise NumericError(f"non-finite network loss at epoch {epoch}")
            adam_step(params, grads, state)
            total += loss * idx.size
        losses.append(total / X.shape[0])
        if epoch % 10 == 0 or epoch == epochs:
            logger.info(f"NN epoch {epoch}/{epochs}: loss={losses[-1]:.5f}")
    return NNModel(network=network, feature_names=feature_names), losses
