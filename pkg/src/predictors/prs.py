"""
Polygenic risk scores from an effect-size table.
"""
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Union

import numpy as np
import pandas as pd

from cohort import GenotypeMatrix, impute_mean
from errors import DataError, MissingVariantError
from utils import atomic_write_text
from .base import RAW, Predictor

logger = logging.getLogger(__name__)


@dataclass
class PrsWeights:
    variant_ids: List[str]
    betas: np.ndarray

    def __post_init__(self):
        self.variant_ids = [str(v) for v in self.variant_ids]
        self.betas = np.asarray(self.betas, dtype=np.float64).reshape(-1)
        if len(self.variant_ids) != self.betas.size:
            raise DataError(f"{len(self.variant_ids)} variant ids for {self.betas.size} effect sizes")
        if len(set(self.variant_ids)) != len(self.variant_ids):
            raise DataError("PRS weight table has duplicate variant ids")
        if not np.all(np.isfinite(self.betas)):
            raise DataError("PRS effect sizes must be finite")

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"variant_id": self.variant_ids, "beta": self.betas})


def load_prs_weights(path: Union[str, Path]) -> PrsWeights:
    """Read a ``variant_id<TAB>beta`` table; other columns are ignored."""
    try:
        frame = pd.read_csv(path, sep="\t", dtype={"variant_id": str}, keep_default_na=False)
    except FileNotFoundError as e:
        raise DataError(f"PRS weights file not found: {path}") from e
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise DataError(f"cannot parse PRS weights {path}: {e}") from e
    missing = {"variant_id", "beta"} - set(frame.columns)
    if missing:
        raise DataError(f"{path}: missing column(s) {sorted(missing)}")
    betas = pd.to_numeric(frame["beta"], errors="coerce").to_numpy(dtype=np.float64)
    if np.isnan(betas).any():
        line = int(np.flatnonzero(np.isnan(betas))[0]) + 2
        raise DataError(f"{path}: line {line}: beta is not a number")
    weights = PrsWeights(list(frame["variant_id"]), betas)
    logger.info(f"Loaded {len(weights.variant_ids)} PRS weights from {path}")
    return weights


def save_prs_weights(weights: PrsWeights, path: Union[str, Path]) -> Path:
    text = weights.to_frame().to_csv(sep="\t", index=False, float_format="%.17g", lineterminator="\n")
    return atomic_write_text(path, text)


def prs_score(genotypes: GenotypeMatrix, weights: PrsWeights) -> np.ndarray:
    """
    Dosage-weighted sum of effect sizes per participant.

    Missing dosages are mean-imputed before scoring.

    Raises:
        MissingVariantError: a weighted variant is absent from the genotypes
    """
    present = set(genotypes.variant_ids)
    absent = [v for v in weights.variant_ids if v not in present]
    if absent:
        raise MissingVariantError(absent)
    columns = genotypes.take_variants(genotypes.column_index(weights.variant_ids))
    return impute_mean(columns).dosages @ weights.betas


@dataclass
class PrsModel(Predictor):
    weights: PrsWeights
    role: str = RAW

    @property
    def n_features(self) -> int:
        return len(self.weights.variant_ids)

    @property
    def feature_names(self) -> List[str]:
        return self.weights.variant_ids

    def score(self, X: np.ndarray) -> np.ndarray:
        return X @ self.weights.betas

    def predict(self, data) -> np.ndarray:
        if isinstance(data, GenotypeMatrix):
            return prs_score(data, self.weights)
        return super().predict(data)
