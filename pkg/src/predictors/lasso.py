"""
Least-squares Lasso by cyclic coordinate descent, with a cross-validated
regularisation path.

The objective is (1/2n)||y - b - Xw||^2 + lambda*||w||_1 with the intercept b
unpenalised; X and y are centred so b drops out of the descent.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from errors import DataError, DimensionError, ParameterError
from nncore import RngStream, as_matrix, as_vector
from .base import RAW
from .linear import LinearModel

logger = logging.getLogger(__name__)


@dataclass
class LassoFit:
    model: LinearModel
    alpha: float
    alphas: np.ndarray
    cv_mse: np.ndarray
    fold_mse: np.ndarray
    converged: bool

    @property
    def n_nonzero(self) -> int:
        return int(np.count_nonzero(self.model.coefficients))


def soft_threshold(value, threshold: float):
    return np.sign(value) * np.maximum(np.abs(value) - threshold, 0.0)


def lasso_objective(X, y, coefficients, intercept: float, alpha: float) -> float:
    X = as_matrix(X, "X")
    residual = as_vector(y, "y") - intercept - X @ coefficients
    return float(residual @ residual / (2.0 * X.shape[0]) + alpha * np.abs(coefficients).sum())


def alpha_max(X, y) -> float:
    """Smallest lambda at which every coefficient is zero."""
    X = as_matrix(X, "X")
    y = as_vector(y, "y")
    Xc = X - X.mean(axis=0)
    return float(np.max(np.abs(Xc.T @ (y - y.mean()))) / X.shape[0])


def alpha_grid(X, y, n_alphas: int = 10, ratio: float = 1e-3) -> np.ndarray:
    """``n_alphas`` log-spaced values from ``alpha_max`` down to ``alpha_max * ratio``."""
    top = alpha_max(X, y)
    if top == 0.0:
        return np.zeros(1)
    alphas = np.geomspace(top, top * ratio, n_alphas)
    alphas[0] = top
    return alphas


def _descend(Xc: np.ndarray, yc: np.ndarray, col_sq: np.ndarray, w: np.ndarray, alpha: float,
             max_iter: int, tol: float) -> Tuple[bool, int]:
    """Coordinate descent from ``w`` (updated in place) until max|dw| <= tol * max|w|."""
    n = Xc.shape[0]
    residual = yc - Xc @ w
    active = np.flatnonzero(col_sq > 0.0)
    for iteration in range(1, max_iter + 1):
        max_delta = 0.0
        for j in active:
            old = w[j]
            rho = Xc[:, j] @ residual / n + col_sq[j] * old
            new = soft_threshold(rho, alpha) / col_sq[j]
            if new != old:
                residual -= Xc[:, j] * (new - old)
                w[j] = new
                max_delta = max(max_delta, abs(new - old))
        if max_delta <= tol * np.max(np.abs(w), initial=0.0):
            return True, iteration
    return False, max_iter


def lasso_path(X, y, alphas, max_iter: int = 5000, tol: float = 1e-3) -> Tuple[np.ndarray, np.ndarray, List[bool]]:
    """
    Fit every lambda in ``alphas`` (decreasing), warm-starting each from the previous.

    Returns (coefficients of shape (n_alphas, p), intercepts, converged flags).
    """
    X = as_matrix(X, "X")
    y = as_vector(y, "y")
    x_mean = X.mean(axis=0)
    y_mean = y.mean()
    Xc = X - x_mean
    yc = y - y_mean
    col_sq = (Xc ** 2).sum(axis=0) / X.shape[0]

    w = np.zeros(X.shape[1])
    coefs = np.zeros((len(alphas), X.shape[1]))
    converged = []
    for k, alpha in enumerate(alphas):
        ok, iterations = _descend(Xc, yc, col_sq, w, float(alpha), max_iter, tol)
        if not ok:
            logger.warning(f"Lasso did not converge at lambda={alpha:.4e} after {max_iter} iterations")
        logger.debug(f"lambda={alpha:.4e}: {iterations} sweeps, {np.count_nonzero(w)} nonzero")
        coefs[k] = w
        converged.append(ok)
    intercepts = y_mean - coefs @ x_mean
    return coefs, intercepts, converged


def fold_assignment(n: int, folds: int, seed: int) -> np.ndarray:
    assignment = np.empty(n, dtype=int)
    assignment[RngStream(seed).permutation(n)] = np.arange(n) % folds
    return assignment


def fit_lasso_cv(X, y, n_alphas: int = 10, max_iter: int = 5000, tol: float = 1e-3, folds: int = 5,
                 seed: int = 0, path_ratio: float = 1e-3,
                 feature_names: Optional[List[str]] = None) -> LassoFit:
    """
    Pick lambda on the path by k-fold cross-validated MSE, then refit on all rows.

    Ties in CV error keep the larger lambda. Non-convergence is reported in
    ``converged``, never raised.
    """
    X = as_matrix(X, "X")
    y = as_vector(y, "y")
    if X.shape[0] != y.shape[0]:
        raise DimensionError(f"{X.shape[0]} rows for {y.shape[0]} targets")
    if not np.all(np.isfinite(X)) or not np.all(np.isfinite(y)):
        raise DataError("Lasso inputs must be finite; impute missing dosages first")
    if folds < 2 or X.shape[0] < folds:
        raise ParameterError(f"need at least {folds} rows and 2 folds, got {X.shape[0]} rows")

    alphas = alpha_grid(X, y, n_alphas, path_ratio)
    assignment = fold_assignment(X.shape[0], folds, seed)
    fold_mse = np.zeros((folds, alphas.size))
    for k in range(folds):
        held = assignment == k
        coefs, intercepts, _ = lasso_path(X[~held], y[~held], alphas, max_iter, tol)
        predictions = X[held] @ coefs.T + intercepts
        fold_mse[k] = np.mean((predictions - y[held, None]) ** 2, axis=0)
    cv_mse = fold_mse.mean(axis=0)
    best = int(np.argmin(cv_mse))

    coefs, intercepts, converged = lasso_path(X, y, alphas[:best + 1], max_iter, tol)
    model = LinearModel(coefs[-1], intercepts[-1], role=RAW, feature_names=feature_names)
    fit = LassoFit(model=model, alpha=float(alphas[best]), alphas=alphas, cv_mse=cv_mse,
                   fold_mse=fold_mse, converged=all(converged))
    logger.info(f"Lasso chose lambda={fit.alpha:.4e} (path index {best}) with {fit.n_nonzero} nonzero coefficients")
    return fit
