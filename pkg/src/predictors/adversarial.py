"""
Wasserstein adversarial baseline.

A backbone (fc1, fc2) produces 20-dimensional features and a linear head
(fc3) produces the risk logit. Ancestry groups are domains: the largest
group is the reference, and one critic per other domain estimates the
Wasserstein distance between reference and domain features. Critics are
trained with a gradient penalty; the backbone minimises the logistic loss
plus ``lambda_w`` times the mean estimated distance.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from errors import DataError, DimensionError, NumericError
from nncore import (
    MLP,
    AdamState,
    AffineLayer,
    LayerSpec,
    RngStream,
    adam_step,
    as_matrix,
    as_vector,
    bce_with_logits_grad,
    require_finite,
)
from .base import RAW, Predictor
from .network import iterate_batches

logger = logging.getLogger(__name__)

FEATURE_DIM = 20
CRITIC_HIDDEN = 10
PENALTY_NORM_FLOOR = 1e-12


def backbone_specs(input_dim: int) -> List[LayerSpec]:
    return [LayerSpec("fc1", input_dim, 200), LayerSpec("fc2", 200, FEATURE_DIM)]


def critic_specs() -> List[LayerSpec]:
    return [LayerSpec("fc1", FEATURE_DIM, CRITIC_HIDDEN), LayerSpec("fc2", CRITIC_HIDDEN, 1, activation="identity")]


@dataclass
class AdvModel(Predictor):
    backbone: MLP
    head: AffineLayer
    critics: Dict[str, MLP] = field(default_factory=dict)
    reference: Optional[str] = None
    role: str = RAW
    feature_names: Optional[List[str]] = None

    @property
    def n_features(self) -> int:
        return self.backbone.in_dim

    def parameters(self) -> Dict[str, np.ndarray]:
        """Backbone and head parameters (the critics are optimised separately)."""
        params = dict(self.backbone.parameters())
        params["fc3.W"] = self.head.W
        params["fc3.b"] = self.head.b
        return params

    def features(self, X: np.ndarray) -> np.ndarray:
        return self.backbone.predict(X)

    def score(self, X: np.ndarray) -> np.ndarray:
        return self.head.forward(self.features(X))[0][:, 0]

    def domain_distance(self, X, domains) -> Dict[str, float]:
        """Critic-estimated distance between the reference and each other domain on ``X``."""
        X = self.features_from(X)
        domains = np.asarray(domains).astype(str).reshape(-1)
        if domains.size != X.shape[0]:
            raise DimensionError(f"{domains.size} domain labels for {X.shape[0]} rows")
        h = self.features(X)
        ref = h[domains == self.reference]
        out = {}
        for name, critic in self.critics.items():
            other = h[domains == name]
            if ref.shape[0] and other.shape[0]:
                out[name] = critic_distance(critic, ref, other)
        return out


def critic_distance(critic: MLP, h_ref: np.ndarray, h_other: np.ndarray) -> float:
    return float(critic.predict(h_ref).mean() - critic.predict(h_other).mean())


def critic_penalty(critic: MLP, h: np.ndarray) -> Tuple[float, Dict[str, np.ndarray]]:
    """
    Gradient penalty mean((||grad_h critic(h)|| - 1)^2) and its parameter gradients.

    For critic(h) = w2 . relu(W1 h + b1) + b2 the input gradient is
    W1^T (m * w2) with m the active-unit mask; the bias gradients are zero
    because the penalty is piecewise constant in b1 and free of b2.
    """
    first = critic.layers["fc1"]
    second = critic.layers["fc2"]
    h = as_matrix(h, "critic input")
    active = (h @ first.W.T + first.b) > 0.0
    masked = active * second.W[0]
    grad_h = masked @ first.W
    norms = np.linalg.norm(grad_h, axis=1)
    penalty = float(np.mean((norms - 1.0) ** 2))

    upstream = (2.0 * (norms - 1.0) / h.shape[0] / np.maximum(norms, PENALTY_NORM_FLOOR))[:, None] * grad_h
    grads = {
        "fc1.W": masked.T @ upstream,
        "fc1.b": np.zeros_like(first.b),
        "fc2.W": np.sum(active * (upstream @ first.W.T), axis=0)[None, :],
        "fc2.b": np.zeros_like(second.b),
    }
    return penalty, grads


def _critic_step(critic: MLP, state: AdamState, h_ref: np.ndarray, h_other: np.ndarray,
                 gp_weight: float, rng: RngStream) -> Tuple[float, float]:
    """One ascent step on mean critic(ref) - mean critic(other) - gp_weight * penalty."""
    out_ref, cache_ref = critic.forward(h_ref)
    out_other, cache_other = critic.forward(h_other)
    grads_ref, _ = critic.backward(cache_ref, -np.ones_like(out_ref) / h_ref.shape[0])
    grads_other, _ = critic.backward(cache_other, np.ones_like(out_other) / h_other.shape[0])

    m = min(h_ref.shape[0], h_other.shape[0])
    mix = rng.uniform(size=(m, 1))
    interpolated = mix * h_ref[:m] + (1.0 - mix) * h_other[:m]
    penalty, grads_penalty = critic_penalty(critic, interpolated)

    grads = {k: grads_ref[k] + grads_other[k] + gp_weight * grads_penalty[k] for k in grads_ref}
    adam_step(critic.parameters(), grads, state)
    return float(out_ref.mean() - out_other.mean()), penalty


def reference_domain(domains: np.ndarray) -> str:
    """The largest domain, ties broken by name."""
    names, counts = np.unique(domains, return_counts=True)
    return str(sorted(zip(-counts, names))[0][1])


def _fit(X, y, domains: Optional[np.ndarray], epochs: int, lr: float, batch_size: int, seed: int,
         lambda_w: float, critic_steps: int, gp_weight: float,
         feature_names: Optional[List[str]]) -> Tuple[AdvModel, List[float]]:
    X = as_matrix(X, "X")
    y = as_vector(y, "y")
    if X.shape[0] != y.shape[0]:
        raise DimensionError(f"{X.shape[0]} rows for {y.shape[0]} labels")
    require_finite(X, "adversarial inputs")
    if domains is not None and domains.size != X.shape[0]:
        raise DimensionError(f"{domains.size} ancestry labels for {X.shape[0]} rows")

    init_rng, shuffle_rng, critic_rng = RngStream(seed).spawn(3)
    backbone = MLP.build(backbone_specs(X.shape[1]), init_rng)
    head = AffineLayer.initialize(FEATURE_DIM, 1, "identity", init_rng)
    model = AdvModel(backbone=backbone, head=head, feature_names=feature_names)

    critic_states: Dict[str, AdamState] = {}
    if domains is not None:
        model.reference = reference_domain(domains)
        for name in sorted(set(domains.tolist()) - {model.reference}):
            model.critics[name] = MLP.build(critic_specs(), critic_rng)
            critic_states[name] = AdamState.for_params(model.critics[name].parameters(), lr=lr)

    params = model.parameters()
    state = AdamState.for_params(params, lr=lr)
    losses = []
    for epoch in range(1, epochs + 1):
        total = 0.0
        for idx in iterate_batches(shuffle_rng.permutation(X.shape[0]), batch_size):
            h, caches = backbone.forward(X[idx])
            logits, head_cache = head.forward(h)
            loss, grad_logits = bce_with_logits_grad(logits[:, 0], y[idx])
            dW, db, grad_h = head.backward(head_cache, grad_logits[:, None])

            pairs = []
            if domains is not None:
                batch_domains = domains[idx]
                ref_mask = batch_domains == model.reference
                for name in model.critics:
                    other_mask = batch_domains == name
                    if ref_mask.any() and other_mask.any():
                        pairs.append((name, ref_mask, other_mask))
            for name, ref_mask, other_mask in pairs:
                for _ in range(critic_steps):
                    _critic_step(model.critics[name], critic_states[name], h[ref_mask], h[other_mask],
                                 gp_weight, critic_rng)

            if lambda_w > 0.0 and pairs:
                scale = lambda_w / len(pairs)
                for name, ref_mask, other_mask in pairs:
                    critic = model.critics[name]
                    out_ref, cache_ref = critic.forward(h[ref_mask])
                    out_other, cache_other = critic.forward(h[other_mask])
                    loss += scale * float(out_ref.mean() - out_other.mean())
                    _, dx_ref = critic.backward(cache_ref, np.full_like(out_ref, scale / out_ref.shape[0]))
                    _, dx_other = critic.backward(cache_other, np.full_like(out_other, -scale / out_other.shape[0]))
                    grad_h[ref_mask] += dx_ref
                    grad_h[other_mask] += dx_other

            if not np.isfinite(loss):
                raise NumericError(f"non-finite adversarial loss at epoch {epoch}")
            grads, _ = backbone.backward(caches, grad_h)
            grads["fc3.W"], grads["fc3.b"] = dW, db
            adam_step(params, grads, state)
            total += loss * idx.size
        losses.append(total / X.shape[0])
        if epoch % 10 == 0 or epoch == epochs:
            logger.info(f"Adv epoch {epoch}/{epochs}: loss={losses[-1]:.5f}")
    return model, losses


def fit_backbone(X, y, epochs: int = 200, lr: float = 5e-3, batch_size: int = 64, seed: int = 0,
                 feature_names: Optional[List[str]] = None) -> Tuple[AdvModel, List[float]]:
    """Train backbone and head on the logistic loss alone."""
    return _fit(X, y, None, epochs, lr, batch_size, seed, 0.0, 0, 0.0, feature_names)


def fit_adv(X, y, ancestry_labels, epochs: int = 200, lr: float = 5e-3, batch_size: int = 64,
            lambda_w: float = 0.1, critic_steps: int = 5, seed: int = 0, gp_weight: float = 10.0,
            feature_names: Optional[List[str]] = None) -> Tuple[AdvModel, List[float]]:
    """
    Alternate critic ascent and backbone descent on each minibatch.

    With ``lambda_w`` = 0 the backbone follows exactly the ``fit_backbone``
    trajectory for the same seed; critics draw from their own stream.

    Raises:
        DataError: fewer than two ancestry groups
    """
    domains = np.asarray(ancestry_labels).astype(str).reshape(-1)
    if np.unique(domains).size < 2:
        raise DataError("adversarial training needs at least two ancestry groups")
    model, losses = _fit(X, y, domains, epochs, lr, batch_size, seed, lambda_w, critic_steps, gp_weight, feature_names)
    logger.info(f"Adv reference domain {model.reference}; critics for {', '.join(model.critics)}")
    return model, losses
