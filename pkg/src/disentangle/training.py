"""
Autoencoder training under the contrastive weight ramp, and grid search.
"""
import dataclasses
import itertools
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from cohort import LabeledCohort
from config import SEARCH_GRID, TrainConfig
from errors import DataError, NumericError, ParameterError
from evalkit.metrics import safe_auc
from nncore import AdamState, RngStream, adam_step
from predictors.linear import fit_linear_head
from utils import atomic_write_text
from .autoencoder import DisentangledModel, encode, objective
from .erasure import erase_ancestry_means

logger = logging.getLogger(__name__)


def ramp_weight(epoch: int, ramp_start: int, ramp_end: int, alpha: float) -> float:
    """0 up to ``ramp_start``, linear to ``alpha`` at ``ramp_end``, ``alpha`` afterwards."""
    if ramp_end <= ramp_start:
        raise ParameterError(f"ramp_end must exceed ramp_start, got {ramp_start}, {ramp_end}")
    if epoch <= ramp_start:
        return 0.0
    if epoch <= ramp_end:
        return alpha * (epoch - ramp_start) / (ramp_end - ramp_start)
    return alpha


def effective_weights(epoch: int, config: TrainConfig) -> Tuple[float, float]:
    """(weight on the z_d contrastive term, weight on the z_a term) at ``epoch``."""
    return (ramp_weight(epoch, config.ramp_start, config.ramp_end, config.alpha_d),
            ramp_weight(epoch, config.ramp_start, config.ramp_end, config.alpha_a))


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    recon_loss: float
    sc_d_loss: float
    sc_a_loss: float
    weight_d: float
    weight_a: float
    val_auc: Optional[float] = None


@dataclass
class TrainHistory:
    records: List[EpochRecord] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)

    def append(self, record: EpochRecord) -> None:
        self.records.append(record)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records], dtype=np.float64)

    @property
    def final_val_auc(self) -> Optional[float]:
        for record in reversed(self.records):
            if record.val_auc is not None:
                return record.val_auc
        return None

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([dataclasses.asdict(r) for r in self.records],
                            columns=[f.name for f in dataclasses.fields(EpochRecord)])

    def write(self, path: Union[str, Path]) -> Path:
        text = self.to_frame().to_csv(sep="\t", index=False, float_format="%.10g", na_rep="NA", lineterminator="\n")
        return atomic_write_text(path, text)


def _training_arrays(cohort: LabeledCohort, what: str) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    if cohort.ancestry is None:
        raise DataError(f"{what} cohort has no ancestry labels")
    if np.isnan(cohort.x).any():
        raise DataError(f"{what} dosages contain missing values; run QC and imputation first")
    _, ancestry_codes = np.unique(cohort.ancestry.astype(str), return_inverse=True)
    return cohort.x, cohort.y, ancestry_codes


def validation_auc(model: DisentangledModel, train: LabeledCohort, val: LabeledCohort) -> Optional[float]:
    """AUC on ``val`` of a least-squares head fitted on the training z_d."""
    _, z_train = encode(model, train.x)
    head = fit_linear_head(z_train, train.y)
    _, z_val = encode(model, val.x)
    return safe_auc(head.score(z_val), val.y)


def train_dae(train: LabeledCohort, val: Optional[LabeledCohort], config: TrainConfig,
              model: Optional[DisentangledModel] = None) -> Tuple[DisentangledModel, TrainHistory]:
    """
    Train the autoencoder with minibatch Adam.

    Each minibatch is duplicated into two views; the contrastive terms use
    phenotype labels on z_d and ancestry labels on z_a, weighted by the ramp.
    Rows are reshuffled every epoch. A trailing batch of one row is skipped.
    With ``config.erase_ancestry`` the per-ancestry z_d means are equalised on
    the training rows afterwards and the last validation AUC is recomputed.

    Raises:
        DataError: ancestry labels are missing or dosages are not imputed
        NumericError: the loss becomes non-finite
    """
    config.validate()
    X, y, a = _training_arrays(train, "training")
    if val is not None and val.genotypes.n_variants != train.genotypes.n_variants:
        raise DataError(f"validation has {val.genotypes.n_variants} variants, training {train.genotypes.n_variants}")

    init_rng, shuffle_rng = RngStream(config.seed).spawn(2)
    if model is None:
        model = DisentangledModel.build(X.shape[1], config.z_d_dim, config.z_a_dim, init_rng)
    params = model.parameters()
    state = AdamState.for_params(params, lr=config.lr)
    history = TrainHistory()
    n = X.shape[0]
    logger.info(
        f"Training autoencoder {model.dims} on {n} samples for {config.epochs} epochs "
        f"({model.parameter_count()} parameters)")

    for epoch in range(1, config.epochs + 1):
        weight_d, weight_a = effective_weights(epoch, config)
        order = shuffle_rng.permutation(n)
        totals = np.zeros(3)
        seen = 0
        for start in range(0, n, config.batch_size):
            idx = order[start:start + config.batch_size]
            if idx.size < 2:
                logger.warning(f"Epoch {epoch}: skipping a trailing batch of {idx.size} row")
                continue
            result = objective(model, X[idx], y[idx], a[idx], weight_d, weight_a, config.tau)
            if not np.isfinite(result.total):
                raise NumericError(f"non-finite training loss at epoch {epoch}")
            adam_step(params, result.grads, state)
            totals += idx.size * np.array([result.recon, result.sc_d, result.sc_a])
            seen += idx.size
        recon, sc_d, sc_a = totals / max(seen, 1)

        val_auc = None
        if val is not None and (epoch % config.val_every == 0 or epoch == config.epochs):
            val_auc = validation_auc(model, train, val)
        history.append(EpochRecord(epoch, float(recon), float(sc_d), float(sc_a), weight_d, weight_a, val_auc))

        if epoch % config.log_every == 0 or epoch == config.epochs:
            shown = "n/a" if val_auc is None else f"{val_auc:.4f}"
            logger.info(
                f"Epoch {epoch}/{config.epochs}: recon={recon:.5f} sc_d={sc_d:.4f} sc_a={sc_a:.4f} "
                f"w=({weight_d:.2e}, {weight_a:.2e}) val_auc={shown}")

    if config.erase_ancestry:
        model, removed = erase_ancestry_means(model, X, a)
        if removed and val is not None:
            history.records[-1] = dataclasses.replace(history.records[-1], val_auc=validation_auc(model, train, val))
    return model, history


@dataclass
class SearchTrial:
    z_d_dim: int
    z_a_dim: int
    tau: float
    alpha: float
    val_auc: Optional[float]


@dataclass
class SearchResult:
    config: TrainConfig
    model: DisentangledModel
    history: TrainHistory
    trials: List[SearchTrial]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([dataclasses.asdict(t) for t in self.trials])


def search_dae(train: LabeledCohort, val: LabeledCohort, base_config: TrainConfig,
               grid: Optional[Dict[str, Sequence]] = None) -> SearchResult:
    """
    Train one model per grid point and keep the best final validation AUC.

    The grid keys are ``z_d_dim``, ``z_a_dim``, ``tau`` and ``alpha`` (applied
    to both contrastive weights). Ties keep the earlier grid point.
    """
    if val is None:
        raise DataError("hyperparameter search needs a validation cohort")
    grid = grid or SEARCH_GRID
    best: Optional[SearchResult] = None
    best_auc = -np.inf
    trials: List[SearchTrial] = []
    for z_d_dim, z_a_dim, tau, alpha in itertools.product(grid["z_d_dim"], grid["z_a_dim"], grid["tau"], grid["alpha"]):
        config = dataclasses.replace(base_config, z_d_dim=z_d_dim, z_a_dim=z_a_dim, tau=tau,
                                     alpha_d=alpha, alpha_a=alpha)
        model, history = train_dae(train, val, config)
        score = history.final_val_auc
        trials.append(SearchTrial(z_d_dim, z_a_dim, tau, alpha, score))
        logger.info(f"Search z_d={z_d_dim} z_a={z_a_dim} tau={tau} alpha={alpha}: val_auc={score}")
        if score is not None and score > best_auc:
            best_auc = score
            best = SearchResult(config, model, history, trials)
    if best is None:
        raise DataError("no grid point produced a defined validation AUC")
    best.trials = trials
    return best
