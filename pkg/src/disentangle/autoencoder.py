"""
Disentangling autoencoder.

The encoder maps x through a shared trunk (fc1, fc2) into two linear heads,
fc31 for the phenotype latent z_d and fc32 for the ancestry latent z_a. The
decoder reconstructs x from [z_d, z_a] through fc4, fc5 and fc6, the last
with a ReLU since dosages are non-negative.
"""
import logging
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from errors import CheckpointError, DimensionError, ParameterError
from nncore import MLP, AffineLayer, LayerSpec, RngStream, as_matrix, mse_grad, require_cols
from .contrastive import ScParams, duplicate_batch, sc_loss

logger = logging.getLogger(__name__)

HIDDEN_1 = 400
HIDDEN_2 = 200
LAYER_NAMES = ("fc1", "fc2", "fc31", "fc32", "fc4", "fc5", "fc6")


@dataclass
class DisentangledModel:
    trunk: MLP
    head_d: AffineLayer
    head_a: AffineLayer
    decoder: MLP

    @classmethod
    def build(cls, input_dim: int, z_d_dim: int, z_a_dim: int, rng: RngStream) -> "DisentangledModel":
        if min(input_dim, z_d_dim, z_a_dim) < 1:
            raise ParameterError(f"dimensions must be >= 1, got ({input_dim}, {z_d_dim}, {z_a_dim})")
        trunk = MLP.build([
            LayerSpec("fc1", input_dim, HIDDEN_1),
            LayerSpec("fc2", HIDDEN_1, HIDDEN_2),
        ], rng)
        head_d = AffineLayer.initialize(HIDDEN_2, z_d_dim, "identity", rng)
        head_a = AffineLayer.initialize(HIDDEN_2, z_a_dim, "identity", rng)
        decoder = MLP.build([
            LayerSpec("fc4", z_d_dim + z_a_dim, HIDDEN_2),
            LayerSpec("fc5", HIDDEN_2, HIDDEN_1),
            LayerSpec("fc6", HIDDEN_1, input_dim),
        ], rng)
        return cls(trunk=trunk, head_d=head_d, head_a=head_a, decoder=decoder)

    @classmethod
    def from_parameters(cls, arrays: Dict[str, np.ndarray]) -> "DisentangledModel":
        """Rebuild a model from ``"<layer>.W"`` / ``"<layer>.b"`` arrays."""
        missing = [n for n in LAYER_NAMES if f"{n}.W" not in arrays or f"{n}.b" not in arrays]
        if missing:
            raise CheckpointError(f"missing layers: {', '.join(missing)}")

        def layer(name: str, activation: str) -> AffineLayer:
            try:
                return AffineLayer(arrays[f"{name}.W"], arrays[f"{name}.b"], activation)
            except DimensionError as e:
                raise CheckpointError(f"layer {name}: {e}") from e

        model = cls(
            trunk=MLP({"fc1": layer("fc1", "relu"), "fc2": layer("fc2", "relu")}),
            head_d=layer("fc31", "identity"),
            head_a=layer("fc32", "identity"),
            decoder=MLP({"fc4": layer("fc4", "relu"), "fc5": layer("fc5", "relu"), "fc6": layer("fc6", "relu")}),
        )
        model.check_shapes()
        return model

    def check_shapes(self) -> None:
        chain = [
            ("fc2", self.trunk.layers["fc2"].in_dim, self.trunk.layers["fc1"].out_dim),
            ("fc31", self.head_d.in_dim, self.trunk.out_dim),
            ("fc32", self.head_a.in_dim, self.trunk.out_dim),
            ("fc4", self.decoder.in_dim, self.z_d_dim + self.z_a_dim),
            ("fc5", self.decoder.layers["fc5"].in_dim, self.decoder.layers["fc4"].out_dim),
            ("fc6", self.decoder.layers["fc6"].in_dim, self.decoder.layers["fc5"].out_dim),
            ("fc6 output", self.decoder.out_dim, self.input_dim),
        ]
        for name, got, expected in chain:
            if got != expected:
                raise CheckpointError(f"{name}: dimension {got} does not chain with {expected}")

    @property
    def input_dim(self) -> int:
        return self.trunk.in_dim

    @property
    def z_d_dim(self) -> int:
        return self.head_d.out_dim

    @property
    def z_a_dim(self) -> int:
        return self.head_a.out_dim

    @property
    def dims(self) -> Tuple[int, int, int]:
        return self.input_dim, self.z_d_dim, self.z_a_dim

    def parameters(self) -> Dict[str, np.ndarray]:
        params = dict(self.trunk.parameters())
        params.update({"fc31.W": self.head_d.W, "fc31.b": self.head_d.b,
                       "fc32.W": self.head_a.W, "fc32.b": self.head_a.b})
        params.update(self.decoder.parameters())
        return {name: params[name] for layer in LAYER_NAMES for name in (f"{layer}.W", f"{layer}.b")}

    def parameter_count(self) -> int:
        return sum(p.size for p in self.parameters().values())


def build(input_dim: int, z_d_dim: int, z_a_dim: int, rng: RngStream) -> DisentangledModel:
    return DisentangledModel.build(input_dim, z_d_dim, z_a_dim, rng)


def _check_input(model: DisentangledModel, x) -> np.ndarray:
    x = as_matrix(x, "x")
    require_cols(x, model.input_dim, "autoencoder input")
    return x


def encode(model: DisentangledModel, x) -> Tuple[np.ndarray, np.ndarray]:
    """Return ``(z_a, z_d)``."""
    x = _check_input(model, x)
    h = model.trunk.predict(x)
    return model.head_a.forward(h)[0], model.head_d.forward(h)[0]


def reconstruct(model: DisentangledModel, x) -> np.ndarray:
    z_a, z_d = encode(model, x)
    return model.decoder.predict(np.hstack([z_d, z_a]))


@dataclass
class ObjectiveResult:
    total: float
    recon: float
    sc_d: float
    sc_a: float
    grads: Dict[str, np.ndarray]


def _view_summed_grad(z: np.ndarray, labels: np.ndarray, tau: float) -> Tuple[float, np.ndarray]:
    """SC loss of the duplicated batch; gradient folded back onto the N original rows."""
    value, grad = sc_loss(duplicate_batch(z, labels), ScParams(tau))
    n = z.shape[0]
    return value, grad[:n] + grad[n:]


def objective(model: DisentangledModel, x, y, a, weight_d: float, weight_a: float, tau: float) -> ObjectiveResult:
    """
    Reconstruction MSE plus the weighted contrastive terms on z_d (labels y)
    and z_a (labels a), with exact gradients for every parameter.

    Both contrastive values are always reported; a term only contributes to
    the gradient when its weight is positive.
    """
    x = _check_input(model, x)
    y = np.asarray(y).reshape(-1)
    a = np.asarray(a).reshape(-1)
    if y.shape[0] != x.shape[0] or a.shape[0] != x.shape[0]:
        raise DimensionError(f"labels ({y.shape[0]}, {a.shape[0]}) do not match {x.shape[0]} rows")

    h, trunk_caches = model.trunk.forward(x)
    z_d, cache_d = model.head_d.forward(h)
    z_a, cache_a = model.head_a.forward(h)
    x_hat, decoder_caches = model.decoder.forward(np.hstack([z_d, z_a]))

    recon, grad_x_hat = mse_grad(x, x_hat)
    grads, grad_z = model.decoder.backward(decoder_caches, grad_x_hat)
    grad_d = grad_z[:, :model.z_d_dim]
    grad_a = grad_z[:, model.z_d_dim:]

    sc_d, grad_sc_d = _view_summed_grad(z_d, y, tau)
    sc_a, grad_sc_a = _view_summed_grad(z_a, a, tau)
    if weight_d > 0.0:
        grad_d = grad_d + weight_d * grad_sc_d
    if weight_a > 0.0:
        grad_a = grad_a + weight_a * grad_sc_a

    dW, db, grad_h_d = model.head_d.backward(cache_d, grad_d)
    grads["fc31.W"], grads["fc31.b"] = dW, db
    dW, db, grad_h_a = model.head_a.backward(cache_a, grad_a)
    grads["fc32.W"], grads["fc32.b"] = dW, db
    trunk_grads, _ = model.trunk.backward(trunk_caches, grad_h_d + grad_h_a)
    grads.update(trunk_grads)

    total = recon + weight_d * sc_d + weight_a * sc_a
    return ObjectiveResult(total=total, recon=recon, sc_d=sc_d, sc_a=sc_a, grads=grads)
