"""
Ordered stacks of named affine layers.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from errors import DimensionError
from .layers import Activation, AffineLayer, LayerCache
from .rng import RngStream


@dataclass(frozen=True)
class LayerSpec:
    name: str
    in_dim: int
    out_dim: int
    activation: Activation = "relu"
    dropout_p: float = 0.0


@dataclass
class MLP:
    """
    A chain of ``AffineLayer``s applied in order.

    Parameters are exposed as a flat dict ``"<layer>.W"`` / ``"<layer>.b"``
    referencing the layer arrays, so optimizers update the layers in place.
    """
    layers: Dict[str, AffineLayer]
    dropout: Dict[str, float] = field(default_factory=dict)

    @classmethod
    def build(cls, specs: Sequence[LayerSpec], rng: RngStream) -> "MLP":
        layers: Dict[str, AffineLayer] = {}
        previous = None
        for spec in specs:
            if previous is not None and previous != spec.in_dim:
                raise DimensionError(f"layer {spec.name} expects {spec.in_dim} inputs, previous layer gives {previous}")
            layers[spec.name] = AffineLayer.initialize(spec.in_dim, spec.out_dim, spec.activation, rng)
            previous = spec.out_dim
        return cls(layers=layers, dropout={s.name: s.dropout_p for s in specs if s.dropout_p > 0.0})

    @property
    def in_dim(self) -> int:
        return next(iter(self.layers.values())).in_dim

    @property
    def out_dim(self) -> int:
        return next(reversed(self.layers.values())).out_dim

    def parameters(self) -> Dict[str, np.ndarray]:
        params = {}
        for name, layer in self.layers.items():
            params[f"{name}.W"] = layer.W
            params[f"{name}.b"] = layer.b
        return params

    def parameter_count(self) -> int:
        return sum(p.size for p in self.parameters().values())

    def forward(self, x: np.ndarray, train: bool = False,
                rng: Optional[RngStream] = None) -> Tuple[np.ndarray, List[LayerCache]]:
        caches = []
        out = x
        for name, layer in self.layers.items():
            out, cache = layer.forward(out, train=train, dropout_p=self.dropout.get(name, 0.0), rng=rng)
            caches.append(cache)
        return out, caches

    def backward(self, caches: List[LayerCache], upstream: np.ndarray) -> Tuple[Dict[str, np.ndarray], np.ndarray]:
        """Return parameter gradients and the gradient with respect to the input."""
        grads: Dict[str, np.ndarray] = {}
        grad = upstream
        for (name, layer), cache in zip(reversed(list(self.layers.items())), reversed(caches)):
            dW, db, grad = layer.backward(cache, grad)
            grads[f"{name}.W"] = dW
            grads[f"{name}.b"] = db
        return grads, grad

    def predict(self, x: np.ndarray) -> np.ndarray:
        return self.forward(x, train=False)[0]
