"""
Supervised contrastive loss over a duplicated batch.

The batch is replicated into two identical views. For each anchor i the
positives are every other row with the same label (its own duplicate
included). Rows are L2-normalised and the temperature divides the dot
product inside the exponent.
"""
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.special import logsumexp

from errors import DataError, DimensionError, ParameterError
from nncore.matrix import as_matrix

NORM_FLOOR = 1e-12


@dataclass(frozen=True)
class ScParams:
    tau: float

    def __post_init__(self):
        if not self.tau > 0.0:
            raise ParameterError(f"temperature must be > 0, got {self.tau}")


@dataclass
class MultiViewBatch:
    """``Z`` holds 2N rows; row N+i duplicates row i, labels likewise."""
    Z: np.ndarray
    labels: np.ndarray

    @property
    def half(self) -> int:
        return self.Z.shape[0] // 2

    def view_of(self, i: int) -> int:
        """Index of the paired view j(i) (0-based)."""
        n2 = self.Z.shape[0]
        return (i + self.half) % n2

    def positives(self, i: int) -> np.ndarray:
        same = np.flatnonzero(self.labels == self.labels[i])
        return same[same != i]


def duplicate_batch(Z_half, labels) -> MultiViewBatch:
    Z_half = as_matrix(Z_half, "latent batch")
    labels = np.asarray(labels).reshape(-1)
    if labels.shape[0] != Z_half.shape[0]:
        raise DimensionError(f"{labels.shape[0]} labels for {Z_half.shape[0]} rows")
    if Z_half.shape[0] < 2:
        raise DataError(f"contrastive batch needs at least 2 rows, got {Z_half.shape[0]}")
    return MultiViewBatch(Z=np.vstack([Z_half, Z_half]), labels=np.concatenate([labels, labels]))


def sc_loss(batch: MultiViewBatch, params: ScParams) -> Tuple[float, np.ndarray]:
    """
    Return the summed supervised contrastive loss and its gradient with
    respect to the unnormalised rows of ``batch.Z``.

    Anchors without positives contribute nothing; a batch where every anchor
    is positive-free is an error.
    """
    Z = batch.Z
    labels = batch.labels
    n = Z.shape[0]

    norms = np.maximum(np.linalg.norm(Z, axis=1, keepdims=True), NORM_FLOOR)
    Z_hat = Z / norms
    logits = (Z_hat @ Z_hat.T) / params.tau

    self_mask = np.eye(n, dtype=bool)
    positive = (labels[:, None] == labels[None, :]) & ~self_mask
    n_pos = positive.sum(axis=1)
    anchors = n_pos > 0
    if not np.any(anchors):
        raise DataError("degenerate batch: no anchor has a positive")

    masked = np.where(self_mask, -np.inf, logits)
    lse = logsumexp(masked, axis=1)
    log_prob = masked - lse[:, None]

    safe_pos = np.maximum(n_pos, 1)
    per_anchor = -np.where(positive, log_prob, 0.0).sum(axis=1) / safe_pos
    value = float(per_anchor[anchors].sum())

    # dL/dlogits: softmax over r != i minus the normalised positive indicator
    softmax = np.exp(log_prob)
    G = softmax - positive / safe_pos[:, None]
    G[~anchors] = 0.0
    np.fill_diagonal(G, 0.0)

    d_hat = (G + G.T) @ Z_hat / params.tau
    radial = np.sum(d_hat * Z_hat, axis=1, keepdims=True)
    grad = (d_hat - Z_hat * radial) / norms
    return value, grad
