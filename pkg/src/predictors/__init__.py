"""
Prediction heads, baselines and the two-model ensemble.
"""
import numpy as np

from errors import NumericError, ParameterError
from .adversarial import AdvModel, critic_penalty, fit_adv, fit_backbone
from .base import LATENT, RAW, Predictor
from .ensemble import EnsembleWeights, combine, fit_gradient, fit_grid, load_weights, save_weights, surrogate_loss_and_grad
from .lasso import LassoFit, alpha_grid, alpha_max, fit_lasso_cv, lasso_objective, lasso_path, soft_threshold
from .linear import LinearModel, fit_linear_head, load_linear_model, save_linear_model
from .network import NNModel, fit_nn, logistic_loss_and_grad
from .persist import load_model, load_network, save_network
from .prs import PrsModel, PrsWeights, load_prs_weights, prs_score, save_prs_weights


def predict(model: Predictor, data) -> np.ndarray:
    """
    Raw scores from any fitted predictor; higher means more case-like.

    ``data`` is a ``GenotypeMatrix`` or feature matrix for raw-dosage models
    and the z_d matrix for latent heads.
    """
    if not isinstance(model, Predictor):
        raise ParameterError(f"{type(model).__name__} is not a predictor")
    scores = model.predict(data)
    if not np.all(np.isfinite(scores)):
        raise NumericError(f"{type(model).__name__} produced non-finite scores")
    return scores


__all__ = [
    'LATENT',
    'RAW',
    'AdvModel',
    'EnsembleWeights',
    'LassoFit',
    'LinearModel',
    'NNModel',
    'Predictor',
    'PrsModel',
    'PrsWeights',
    'alpha_grid',
    'alpha_max',
    'combine',
    'critic_penalty',
    'fit_adv',
    'fit_backbone',
    'fit_gradient',
    'fit_grid',
    'fit_lasso_cv',
    'fit_linear_head',
    'fit_nn',
    'lasso_objective',
    'lasso_path',
    'load_linear_model',
    'load_model',
    'load_network',
    'load_prs_weights',
    'load_weights',
    'logistic_loss_and_grad',
    'predict',
    'prs_score',
    'save_linear_model',
    'save_network',
    'save_prs_weights',
    'save_weights',
    'soft_threshold',
    'surrogate_loss_and_grad',
]
