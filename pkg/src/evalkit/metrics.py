"""
AUC, per-stratum reports and the heterogeneity sliding-window sweep.
"""
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd
from scipy.stats import rankdata

from cohort import MIXED, SUPERPOPULATIONS
from errors import DimensionError, LabelError, ParameterError, UndefinedAucError
from utils import atomic_write_text

logger = logging.getLogger(__name__)


def _binary_labels(labels) -> np.ndarray:
    labels = np.asarray(labels, dtype=np.float64).reshape(-1)
    if not np.all((labels == 0.0) | (labels == 1.0)):
        raise LabelError("AUC labels must be 0 or 1")
    return labels


def auc(scores, labels) -> float:
    """
    Mann-Whitney AUC: the fraction of (case, control) pairs where the case
    scores higher, ties counted as one half.

    Raises:
        UndefinedAucError: labels contain a single class
    """
    scores = np.asarray(scores, dtype=np.float64).reshape(-1)
    labels = _binary_labels(labels)
    if scores.shape != labels.shape:
        raise DimensionError(f"{scores.size} scores for {labels.size} labels")
    cases = labels == 1.0
    n_case = int(cases.sum())
    n_control = labels.size - n_case
    if n_case == 0 or n_control == 0:
        raise UndefinedAucError(f"AUC is undefined with {n_case} cases and {n_control} controls")
    ranks = rankdata(scores)
    u = ranks[cases].sum() - n_case * (n_case + 1) / 2.0
    return float(u / (n_case * n_control))


def safe_auc(scores, labels) -> Optional[float]:
    """``auc`` or None when a class is missing."""
    try:
        return auc(scores, labels)
    except UndefinedAucError:
        return None


@dataclass
class StratumMetrics:
    name: str
    n: int
    n_case: int
    n_control: int
    auc: Optional[float]

    @property
    def defined(self) -> bool:
        return self.auc is not None

    def to_dict(self) -> dict:
        return {"name": self.name, "n": self.n, "n_case": self.n_case,
                "n_control": self.n_control, "auc": self.auc}


@dataclass
class MetricsReport:
    model: str
    n: int
    n_case: int
    global_auc: float
    strata: List[StratumMetrics] = field(default_factory=list)

    def stratum(self, name: str) -> StratumMetrics:
        for s in self.strata:
            if s.name == name:
                return s
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "global": {"n": self.n, "n_case": self.n_case, "auc": self.global_auc},
            "strata": [s.to_dict() for s in self.strata],
        }


def _stratum_order(names: Sequence[str]) -> List[str]:
    known = [s for s in (*SUPERPOPULATIONS, MIXED) if s in names]
    return known + sorted(set(names) - set(known))


def metrics_by_stratum(scores, labels, strata, model: str = "model") -> MetricsReport:
    """
    Global and per-stratum AUC. A stratum lacking cases or controls is
    reported with ``auc=None``; a globally single-class label vector raises.
    """
    scores = np.asarray(scores, dtype=np.float64).reshape(-1)
    labels = _binary_labels(labels)
    strata = np.array([str(s) for s in np.asarray(strata, dtype=object).reshape(-1)], dtype=object)
    if not scores.size == labels.size == strata.size:
        raise DimensionError(f"lengths differ: {scores.size} scores, {labels.size} labels, {strata.size} strata")

    report = MetricsReport(model=model, n=int(labels.size), n_case=int(labels.sum()),
                           global_auc=auc(scores, labels))
    for name in _stratum_order(list(set(strata.tolist()))):
        mask = strata == name
        y = labels[mask]
        stratum = StratumMetrics(name=name, n=int(mask.sum()), n_case=int(y.sum()),
                                 n_control=int((y == 0).sum()), auc=safe_auc(scores[mask], y))
        if not stratum.defined:
            logger.warning(f"AUC undefined for stratum {name} ({stratum.n_case} cases, {stratum.n_control} controls)")
        report.strata.append(stratum)
    return report


def write_metrics_json(report: MetricsReport, path: Union[str, Path]) -> Path:
    return atomic_write_text(path, json.dumps(report.to_dict(), indent=2) + "\n")


@dataclass
class HetSweep:
    """Per-window AUC along a heterogeneity ordering; NaN marks an undefined window."""
    window: int
    stride: int
    starts: np.ndarray
    n_case: np.ndarray
    aucs: Dict[str, np.ndarray]

    @property
    def n_windows(self) -> int:
        return int(self.starts.size)

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame({
            "window_start": self.starts,
            "window_end": self.starts + self.window,
            "n_case": self.n_case,
        })
        for model, values in self.aucs.items():
            frame[model] = values
        return frame


def window_starts(n: int, window: int, stride: int) -> np.ndarray:
    if window < 1 or stride < 1:
        raise ParameterError(f"window and stride must be positive, got {window}, {stride}")
    if window > n:
        raise ParameterError(f"window {window} is larger than the {n} samples")
    return np.arange(0, n - window + 1, stride)


def het_sweep(scores_by_model: Dict[str, np.ndarray], labels, order, window: int = 750, stride: int = 50) -> HetSweep:
    """Slide a window over the ordered samples and compute each model's AUC per window."""
    labels = _binary_labels(labels)
    n = labels.size
    order = np.asarray(order, dtype=int).reshape(-1)
    if order.size != n or not np.array_equal(np.sort(order), np.arange(n)):
        raise DimensionError(f"order must be a permutation of {n} samples")
    starts = window_starts(n, window, stride)

    ordered_labels = labels[order]
    n_case = np.array([int(ordered_labels[s:s + window].sum()) for s in starts])
    aucs = {}
    for model, scores in scores_by_model.items():
        scores = np.asarray(scores, dtype=np.float64).reshape(-1)
        if scores.size != n:
            raise DimensionError(f"model {model}: {scores.size} scores for {n} labels")
        ordered = scores[order]
        values = [safe_auc(ordered[s:s + window], ordered_labels[s:s + window]) for s in starts]
        aucs[model] = np.array([np.nan if v is None else v for v in values])
    logger.info(f"Heterogeneity sweep: {starts.size} windows of {window} (stride {stride}) over {n} samples")
    return HetSweep(window=window, stride=stride, starts=starts, n_case=n_case, aucs=aucs)


def write_het_sweep(sweep: HetSweep, path: Union[str, Path]) -> Path:
    text = sweep.to_frame().to_csv(sep="\t", index=False, float_format="%.10g", na_rep="NA", lineterminator="\n")
    return atomic_write_text(path, text)
