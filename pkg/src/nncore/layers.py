"""
Affine layers with hand-written backward passes.
"""
from dataclasses import dataclass
from typing import Dict, Literal, Optional, Tuple

import numpy as np

from errors import DimensionError, ParameterError
from .matrix import as_matrix, require_cols
from .rng import RngStream

Activation = Literal["relu", "identity"]
ACTIVATIONS = ("relu", "identity")


@dataclass
class LayerCache:
    """Everything backward needs from one forward call."""
    x: np.ndarray
    pre: np.ndarray
    dropout_mask: Optional[np.ndarray] = None


@dataclass
class AffineLayer:
    """
    Fully connected layer ``y = act(x @ W.T + b)``.

    ``W`` has shape (out, in) and ``b`` shape (out,).
    """
    W: np.ndarray
    b: np.ndarray
    activation: Activation = "relu"

    def __post_init__(self):
        self.W = np.asarray(self.W, dtype=np.float64)
        self.b = np.asarray(self.b, dtype=np.float64).reshape(-1)
        if self.W.ndim != 2 or self.b.shape != (self.W.shape[0],):
            raise DimensionError(f"inconsistent layer shapes W{self.W.shape} b{self.b.shape}")
        if self.activation not in ACTIVATIONS:
            raise ParameterError(f"unknown activation: {self.activation}")

    @classmethod
    def initialize(cls, in_dim: int, out_dim: int, activation: Activation, rng: RngStream) -> "AffineLayer":
        """He-scaled normal weights for ReLU layers, 1/in variance otherwise; zero biases."""
        if in_dim < 1 or out_dim < 1:
            raise ParameterError(f"layer dimensions must be >= 1, got ({in_dim}, {out_dim})")
        gain = 2.0 if activation == "relu" else 1.0
        W = rng.normal(0.0, np.sqrt(gain / in_dim), size=(out_dim, in_dim))
        return cls(W=W, b=np.zeros(out_dim), activation=activation)

    @classmethod
    def zeros(cls, in_dim: int, out_dim: int, activation: Activation = "relu") -> "AffineLayer":
        return cls(W=np.zeros((out_dim, in_dim)), b=np.zeros(out_dim), activation=activation)

    @property
    def in_dim(self) -> int:
        return self.W.shape[1]

    @property
    def out_dim(self) -> int:
        return self.W.shape[0]

    def parameters(self) -> Dict[str, np.ndarray]:
        return {"W": self.W, "b": self.b}

    def forward(self, x, train: bool = False, dropout_p: float = 0.0,
                rng: Optional[RngStream] = None) -> Tuple[np.ndarray, LayerCache]:
        """
        Apply the layer, then inverted dropout when training.

        Dropout zeroes each unit with probability ``dropout_p`` and scales the
        survivors by 1/(1 - p); outside training it is the identity.
        """
        x = as_matrix(x, "layer input")
        require_cols(x, self.in_dim, "layer forward")
        if not 0.0 <= dropout_p < 1.0:
            raise ParameterError(f"dropout_p must be in [0, 1), got {dropout_p}")

        pre = x @ self.W.T + self.b
        y = np.maximum(pre, 0.0) if self.activation == "relu" else pre.copy()

        mask = None
        if train and dropout_p > 0.0:
            if rng is None:
                raise ParameterError("dropout in train mode needs an rng stream")
            keep = rng.random(y.shape) >= dropout_p
            mask = keep / (1.0 - dropout_p)
            y = y * mask
        return y, LayerCache(x=x, pre=pre, dropout_mask=mask)

    def backward(self, cache: LayerCache, upstream) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Return (dW, db, dx) for the forward call that produced ``cache``."""
        grad = as_matrix(upstream, "upstream gradient")
        if grad.shape != cache.pre.shape:
            raise DimensionError(f"upstream gradient shape {grad.shape} != output shape {cache.pre.shape}")
        if cache.dropout_mask is not None:
            grad = grad * cache.dropout_mask
        if self.activation == "relu":
            grad = grad * (cache.pre > 0.0)
        dW = grad.T @ cache.x
        db = grad.sum(axis=0)
        dx = grad @ self.W
        return dW, db, dx
