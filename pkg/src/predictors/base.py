"""
Base class for fitted predictors.
"""
from abc import ABC, abstractmethod
from typing import List, Optional

import numpy as np

from cohort import GenotypeMatrix, impute_mean
from errors import DimensionError, MissingVariantError, ParameterError

RAW = "raw-dosage"
LATENT = "z_d-latent"
ROLES = (RAW, LATENT)


class Predictor(ABC):
    """
    A fitted model producing raw continuous risk scores, higher meaning more case-like.

    ``role`` says what the model consumes: raw dosages or the phenotype latent.
    """
    role: str = RAW
    feature_names: Optional[List[str]] = None

    @property
    @abstractmethod
    def n_features(self) -> int:
        pass

    @abstractmethod
    def score(self, X: np.ndarray) -> np.ndarray:
        """Scores for a feature matrix whose columns match the fit-time features."""
        pass

    def features_from(self, data) -> np.ndarray:
        """
        Turn ``data`` into this model's feature matrix.

        A ``GenotypeMatrix`` is accepted for raw-dosage models only; its columns
        are selected by variant id when the model knows its feature names, and
        missing dosages are mean-imputed.
        """
        if isinstance(data, GenotypeMatrix):
            if self.role != RAW:
                raise ParameterError(f"a {self.role} model cannot score raw genotypes; encode them first")
            genotypes = data
            if self.feature_names is not None:
                lookup = set(genotypes.variant_ids)
                absent = [v for v in self.feature_names if v not in lookup]
                if absent:
                    raise MissingVariantError(absent)
                genotypes = genotypes.take_variants(genotypes.column_index(self.feature_names))
            X = impute_mean(genotypes).dosages
        else:
            X = np.asarray(data, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise DimensionError(f"model expects {self.n_features} features, got shape {X.shape}")
        return X

    def predict(self, data) -> np.ndarray:
        return self.score(self.features_from(data))
