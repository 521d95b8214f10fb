"""
Central finite-difference gradient checker.
"""
import logging
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from errors import NumericError
from .rng import RngStream

logger = logging.getLogger(__name__)

LossFn = Callable[[], Tuple[float, Dict[str, np.ndarray]]]


def grad_check(loss_fn: LossFn, params: Dict[str, np.ndarray], h: float = 1e-5,
               n_samples: Optional[int] = 20, rng: Optional[RngStream] = None, floor: float = 1e-12) -> float:
    """
    Compare analytic gradients against central differences.

    ``loss_fn`` takes no arguments, reads ``params`` (perturbed here in place
    and restored) and returns ``(loss, grads)`` keyed like ``params``. It must
    be deterministic, so dropout has to be off.

    Up to ``n_samples`` coordinates are sampled per parameter array (all of
    them when ``n_samples`` is None). Returns the largest
    |analytic - numeric| / max(floor, |analytic| + |numeric|); a larger
    ``floor`` keeps round-off on near-zero gradients out of the result.
    """
    rng = rng or RngStream(0)
    loss, analytic = loss_fn()
    if not np.isfinite(loss):
        raise NumericError("loss is not finite at the base point")
    analytic = {name: np.array(g, dtype=np.float64, copy=True) for name, g in analytic.items()}

    worst = 0.0
    for name, param in params.items():
        flat = param.flat
        if param.size == 0:
            continue
        if n_samples is None or n_samples >= param.size:
            coords = np.arange(param.size)
        else:
            coords = rng.generator.choice(param.size, size=n_samples, replace=False)
        grad = analytic[name].reshape(-1)
        for idx in coords:
            original = flat[idx]
            flat[idx] = original + h
            plus, _ = loss_fn()
            flat[idx] = original - h
            minus, _ = loss_fn()
            flat[idx] = original
            if not (np.isfinite(plus) and np.isfinite(minus)):
                raise NumericError(f"loss is not finite while perturbing {name}[{idx}]")
            numeric = (plus - minus) / (2.0 * h)
            a = grad[idx]
            err = abs(a - numeric) / max(floor, abs(a) + abs(numeric))
            if err > worst:
                worst = err
                logger.debug(f"grad_check {name}[{idx}]: analytic={a:.6e} numeric={numeric:.6e} rel={err:.3e}")
    return worst
