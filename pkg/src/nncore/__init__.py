"""
Deterministic dense-network kernel: layers, losses, Adam and gradient checks.
"""
from .gradcheck import grad_check
from .layers import AffineLayer, LayerCache
from .losses import bce_with_logits, bce_with_logits_grad, mse, mse_grad
from .matrix import as_matrix, as_vector, require_cols, require_finite
from .network import MLP, LayerSpec
from .optim import AdamState, adam_step
from .rng import RngStream
from .serialize import pack_arrays, unpack_arrays

__all__ = [
    'AdamState',
    'AffineLayer',
    'LayerCache',
    'LayerSpec',
    'MLP',
    'RngStream',
    'adam_step',
    'as_matrix',
    'as_vector',
    'bce_with_logits',
    'bce_with_logits_grad',
    'grad_check',
    'mse',
    'mse_grad',
    'pack_arrays',
    'require_cols',
    'require_finite',
    'unpack_arrays',
]
