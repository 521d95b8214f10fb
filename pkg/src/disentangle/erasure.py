"""
Linear removal of ancestry from the phenotype latent.

After training, the directions along which the per-ancestry means of z_d
differ are projected out of fc31, and the pooled mean is added back along
them. Every ancestry then has the same z_d mean on the training rows, so no
linear read-out of z_d separates ancestries better than a constant one. The
result is still a single affine head, and checkpoints keep their layout.
"""
import dataclasses
import logging
from typing import Tuple

import numpy as np
from scipy import linalg

from nncore import AffineLayer
from .autoencoder import DisentangledModel, encode

logger = logging.getLogger(__name__)


def class_mean_offsets(Z: np.ndarray, codes: np.ndarray) -> np.ndarray:
    """(dim, n_classes) matrix whose columns are class mean minus pooled mean."""
    Z = np.asarray(Z, dtype=np.float64)
    codes = np.asarray(codes)
    pooled = Z.mean(axis=0)
    return np.stack([Z[codes == c].mean(axis=0) - pooled for c in np.unique(codes)], axis=1)


def erase_ancestry_means(model: DisentangledModel, X: np.ndarray,
                         codes: np.ndarray) -> Tuple[DisentangledModel, int]:
    """
    Fold the mean-equalising projection into fc31.

    With Q an orthonormal basis of the class mean offsets of z_d on ``X`` and
    P = Q Q^T, the new head gives z' = (I - P) z + P mu, where mu is the
    pooled mean. Returns the new model and the number of directions removed;
    a single ancestry removes nothing and returns ``model`` itself.
    """
    codes = np.asarray(codes)
    if np.unique(codes).size < 2:
        return model, 0
    _, z_d = encode(model, X)
    basis = linalg.orth(class_mean_offsets(z_d, codes))
    rank = basis.shape[1]
    if rank == 0:
        return model, 0
    projector = basis @ basis.T
    keep = np.eye(projector.shape[0]) - projector
    head = model.head_d
    erased = AffineLayer(keep @ head.W, keep @ head.b + projector @ z_d.mean(axis=0), head.activation)
    logger.info(f"Removed {rank} ancestry mean direction(s) from z_d")
    return dataclasses.replace(model, head_d=erased), rank
