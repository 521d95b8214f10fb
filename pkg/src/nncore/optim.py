"""
Adam optimizer over named parameter arrays.
"""
from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from errors import DimensionError

DEFAULT_BETA1 = 0.9
DEFAULT_BETA2 = 0.999
DEFAULT_EPS = 1e-8


@dataclass
class AdamState:
    """First/second moment accumulators keyed like the parameters."""
    lr: float
    beta1: float = DEFAULT_BETA1
    beta2: float = DEFAULT_BETA2
    eps: float = DEFAULT_EPS
    t: int = 0
    m: Dict[str, np.ndarray] = field(default_factory=dict)
    v: Dict[str, np.ndarray] = field(default_factory=dict)

    @classmethod
    def for_params(cls, params: Dict[str, np.ndarray], lr: float, **kwargs) -> "AdamState":
        state = cls(lr=lr, **kwargs)
        for name, value in params.items():
            state.m[name] = np.zeros_like(value)
            state.v[name] = np.zeros_like(value)
        return state


def adam_step(params: Dict[str, np.ndarray], grads: Dict[str, np.ndarray], state: AdamState) -> None:
    """
    One bias-corrected Adam update, applied to ``params`` in place.

    Parameters without an entry in ``grads`` are left untouched.
    """
    state.t += 1
    b1, b2 = state.beta1, state.beta2
    correction1 = 1.0 - b1 ** state.t
    correction2 = 1.0 - b2 ** state.t
    for name, grad in grads.items():
        param = params[name]
        if grad.shape != param.shape:
            raise DimensionError(f"gradient for {name} has shape {grad.shape}, parameter {param.shape}")
        if name not in state.m:
            state.m[name] = np.zeros_like(param)
            state.v[name] = np.zeros_like(param)
        m = state.m[name]
        v = state.v[name]
        m *= b1
        m += (1.0 - b1) * grad
        v *= b2
        v += (1.0 - b2) * grad * grad
        m_hat = m / correction1
        v_hat = v / correction2
        param -= state.lr * m_hat / (np.sqrt(v_hat) + state.eps)
