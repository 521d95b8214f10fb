"""
Genotype and cohort data model.
"""
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from errors import DataError, DimensionError, RangeError

SUPERPOPULATIONS: Tuple[str, ...] = ("EUR", "AFR", "AMR", "EAS", "SAS")
MIXED = "MIX"


def _require_unique(ids: Sequence[str], what: str) -> None:
    seen = set()
    dupes = []
    for i in ids:
        if i in seen:
            dupes.append(i)
        seen.add(i)
    if dupes:
        raise DataError(f"duplicate {what}: {', '.join(sorted(set(dupes))[:10])}")


@dataclass
class GenotypeMatrix:
    """
    N x M dosage matrix (participants x variants).

    Missing dosages are NaN; every observed dosage lies in [0, 2].
    """
    sample_ids: List[str]
    variant_ids: List[str]
    dosages: np.ndarray

    def __post_init__(self):
        self.sample_ids = [str(s) for s in self.sample_ids]
        self.variant_ids = [str(v) for v in self.variant_ids]
        self.dosages = np.asarray(self.dosages, dtype=np.float64)
        if self.dosages.shape != (len(self.sample_ids), len(self.variant_ids)):
            raise DimensionError(
                f"dosage shape {self.dosages.shape} does not match "
                f"{len(self.sample_ids)} samples x {len(self.variant_ids)} variants")
        _require_unique(self.sample_ids, "sample ids")
        _require_unique(self.variant_ids, "variant ids")
        observed = self.dosages[~np.isnan(self.dosages)]
        if observed.size and (observed.min() < 0.0 or observed.max() > 2.0):
            rows, cols = np.nonzero((self.dosages < 0.0) | (self.dosages > 2.0))
            r, c = rows[0], cols[0]
            raise RangeError(
                f"dosage {self.dosages[r, c]} outside [0, 2] at sample {self.sample_ids[r]}, "
                f"variant {self.variant_ids[c]}")

    @property
    def n_samples(self) -> int:
        return len(self.sample_ids)

    @property
    def n_variants(self) -> int:
        return len(self.variant_ids)

    @property
    def missing(self) -> np.ndarray:
        return np.isnan(self.dosages)

    def take_samples(self, idx: np.ndarray) -> "GenotypeMatrix":
        idx = np.asarray(idx, dtype=int)
        return GenotypeMatrix([self.sample_ids[i] for i in idx], list(self.variant_ids), self.dosages[idx])

    def take_variants(self, idx: np.ndarray) -> "GenotypeMatrix":
        idx = np.asarray(idx, dtype=int)
        return GenotypeMatrix(list(self.sample_ids), [self.variant_ids[j] for j in idx], self.dosages[:, idx])

    def column_index(self, variant_ids: Sequence[str]) -> np.ndarray:
        lookup = {v: j for j, v in enumerate(self.variant_ids)}
        return np.array([lookup[v] for v in variant_ids], dtype=int)


@dataclass
class LabeledCohort:
    """
    Genotypes with aligned phenotype, ancestry labels, ancestry proportions and age.

    ``proportion_names`` names the columns of ``proportions`` (a subset of
    the five superpopulations); each proportion row sums to 1.
    """
    genotypes: GenotypeMatrix
    y: np.ndarray
    ancestry: Optional[np.ndarray] = None
    proportions: Optional[np.ndarray] = None
    proportion_names: Tuple[str, ...] = field(default_factory=tuple)
    age: Optional[np.ndarray] = None

    def __post_init__(self):
        n = self.genotypes.n_samples
        self.y = np.asarray(self.y, dtype=np.float64).reshape(-1)
        if self.y.shape[0] != n:
            raise DimensionError(f"{self.y.shape[0]} phenotypes for {n} samples")
        if self.ancestry is not None:
            self.ancestry = np.asarray(self.ancestry, dtype=object).reshape(-1)
            if self.ancestry.shape[0] != n:
                raise DimensionError(f"{self.ancestry.shape[0]} ancestry labels for {n} samples")
        if self.age is not None:
            self.age = np.asarray(self.age, dtype=np.float64).reshape(-1)
            if self.age.shape[0] != n:
                raise DimensionError(f"{self.age.shape[0]} ages for {n} samples")
        if self.proportions is not None:
            self.proportions = np.asarray(self.proportions, dtype=np.float64)
            self.proportion_names = tuple(self.proportion_names)
            if self.proportions.shape != (n, len(self.proportion_names)):
                raise DimensionError(
                    f"proportions shape {self.proportions.shape} does not match "
                    f"{n} samples x {len(self.proportion_names)} components")
            sums = self.proportions.sum(axis=1)
            bad = np.flatnonzero(np.abs(sums - 1.0) > 1e-6)
            if bad.size:
                raise DataError(
                    f"ancestry proportions of sample {self.sample_ids[bad[0]]} sum to {sums[bad[0]]}, not 1")

    @property
    def sample_ids(self) -> List[str]:
        return self.genotypes.sample_ids

    @property
    def n_samples(self) -> int:
        return self.genotypes.n_samples

    @property
    def x(self) -> np.ndarray:
        return self.genotypes.dosages

    @property
    def controls(self) -> np.ndarray:
        return self.y == 0.0

    def subset(self, idx) -> "LabeledCohort":
        """Rows ``idx`` (indices or boolean mask) in the given order."""
        idx = np.asarray(idx)
        if idx.dtype == bool:
            idx = np.flatnonzero(idx)
        return LabeledCohort(
            genotypes=self.genotypes.take_samples(idx),
            y=self.y[idx],
            ancestry=None if self.ancestry is None else self.ancestry[idx],
            proportions=None if self.proportions is None else self.proportions[idx],
            proportion_names=self.proportion_names,
            age=None if self.age is None else self.age[idx],
        )

    def with_genotypes(self, genotypes: GenotypeMatrix) -> "LabeledCohort":
        if genotypes.sample_ids != self.sample_ids:
            raise DataError("replacement genotypes are not aligned with the cohort samples")
        return replace(self, genotypes=genotypes)

    def with_labels(self, y: np.ndarray) -> "LabeledCohort":
        return replace(self, y=np.asarray(y, dtype=np.float64))
