"""
Variant quality control and mean imputation.
"""
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Tuple, Union

import numpy as np
import pandas as pd
from scipy.stats import chi2

from config import QcThresholds
from errors import ConfigError, DataError, DimensionError
from utils import atomic_write_text
from .data import GenotypeMatrix

logger = logging.getLogger(__name__)

MISSING_RATE = "missing-rate"
LOW_MAF = "maf"
HWE = "hwe"


@dataclass(frozen=True)
class QcRecord:
    variant_id: str
    reason: str
    statistic: float


@dataclass
class QcReport:
    """Dropped variants, each with the first filter it failed and that filter's statistic."""
    n_input: int
    dropped: List[QcRecord] = field(default_factory=list)

    @property
    def n_kept(self) -> int:
        return self.n_input - len(self.dropped)

    def counts(self) -> dict:
        out = {MISSING_RATE: 0, LOW_MAF: 0, HWE: 0}
        for record in self.dropped:
            out[record.reason] += 1
        return out

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [(r.variant_id, r.reason, r.statistic) for r in self.dropped],
            columns=["variant_id", "reason", "statistic"],
        )

    def write(self, path: Union[str, Path]) -> Path:
        text = self.to_frame().to_csv(sep="\t", index=False, float_format="%.6g", lineterminator="\n")
        return atomic_write_text(path, text)


def missing_rates(dosages: np.ndarray) -> np.ndarray:
    return np.isnan(dosages).mean(axis=0)


def minor_allele_frequencies(dosages: np.ndarray) -> np.ndarray:
    """MAF from mean dosage / 2 over observed values; all-missing columns give NaN."""
    observed = ~np.isnan(dosages)
    counts = observed.sum(axis=0)
    totals = np.where(observed, dosages, 0.0).sum(axis=0)
    with np.errstate(invalid="ignore", divide="ignore"):
        freq = totals / (2.0 * counts)
    return np.minimum(freq, 1.0 - freq)


def hwe_pvalues(dosages: np.ndarray) -> np.ndarray:
    """
    One-degree-of-freedom chi-square HWE test per column.

    Dosages are rounded to the nearest genotype in {0, 1, 2}; missing values
    are ignored. Cells with zero expected count are left out of the sum, and
    a column with no observed genotypes gets p = 1.
    """
    rounded = np.rint(dosages)
    observed = np.stack([np.sum(rounded == g, axis=0) for g in (0.0, 1.0, 2.0)]).astype(np.float64)
    n = observed.sum(axis=0)
    with np.errstate(invalid="ignore", divide="ignore"):
        p = (observed[1] + 2.0 * observed[2]) / (2.0 * n)
        expected = np.stack([n * (1 - p) ** 2, 2 * n * p * (1 - p), n * p ** 2])
        terms = np.where(expected > 0, (observed - expected) ** 2 / expected, 0.0)
    statistic = np.nan_to_num(terms).sum(axis=0)
    pvalues = chi2.sf(statistic, df=1)
    return np.where(n > 0, pvalues, 1.0)


def qc_filter(genotypes: GenotypeMatrix, control_mask, thresholds: QcThresholds) -> Tuple[GenotypeMatrix, QcReport]:
    """
    Drop variants failing, in order: missing rate, minor allele frequency,
    and Hardy-Weinberg equilibrium in controls.

    HWE is skipped when ``thresholds.hwe_p_floor`` is 0.

    Raises:
        ConfigError: HWE is enabled but there are no controls
    """
    control_mask = np.asarray(control_mask, dtype=bool).reshape(-1)
    if control_mask.shape[0] != genotypes.n_samples:
        raise DimensionError(f"control mask has {control_mask.shape[0]} rows for {genotypes.n_samples} samples")
    hwe_enabled = thresholds.hwe_p_floor > 0.0
    if hwe_enabled and not control_mask.any():
        raise ConfigError("HWE filtering is enabled but the cohort has no controls")

    X = genotypes.dosages
    missing = missing_rates(X)
    maf = minor_allele_frequencies(X)
    hwe = hwe_pvalues(X[control_mask]) if hwe_enabled else np.ones(genotypes.n_variants)

    report = QcReport(n_input=genotypes.n_variants)
    keep = []
    for j, variant in enumerate(genotypes.variant_ids):
        if missing[j] > thresholds.max_missing_rate:
            report.dropped.append(QcRecord(variant, MISSING_RATE, float(missing[j])))
        elif np.isnan(maf[j]) or maf[j] < thresholds.min_maf:
            report.dropped.append(QcRecord(variant, LOW_MAF, float(maf[j])))
        elif hwe[j] < thresholds.hwe_p_floor:
            report.dropped.append(QcRecord(variant, HWE, float(hwe[j])))
        else:
            keep.append(j)

    counts = report.counts()
    logger.info(
        f"QC kept {report.n_kept}/{report.n_input} variants "
        f"(missing-rate {counts[MISSING_RATE]}, maf {counts[LOW_MAF]}, hwe {counts[HWE]})")
    return genotypes.take_variants(np.array(keep, dtype=int)), report


def impute_mean(genotypes: GenotypeMatrix) -> GenotypeMatrix:
    """Replace missing dosages by the per-variant mean of observed dosages."""
    X = genotypes.dosages
    missing = np.isnan(X)
    if not missing.any():
        return genotypes
    empty = np.flatnonzero(missing.all(axis=0))
    if empty.size:
        names = [genotypes.variant_ids[j] for j in empty[:10]]
        raise DataError(f"cannot impute {empty.size} all-missing variant(s): {', '.join(names)}")
    means = np.nanmean(X, axis=0)
    filled = np.where(missing, means[None, :], X)
    logger.debug(f"Imputed {int(missing.sum())} missing dosages")
    return GenotypeMatrix(list(genotypes.sample_ids), list(genotypes.variant_ids), filled)
