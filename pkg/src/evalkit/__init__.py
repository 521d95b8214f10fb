"""
Evaluation: AUC, strata reports, heterogeneity sweeps, projections and probes.
"""
from .metrics import (
    HetSweep,
    MetricsReport,
    StratumMetrics,
    auc,
    het_sweep,
    metrics_by_stratum,
    safe_auc,
    window_starts,
    write_het_sweep,
    write_metrics_json,
)
from .probe import ProbeResult, linear_probe_accuracy
from .projection import embeddings_frame, pca2, write_embeddings

__all__ = [
    'HetSweep',
    'MetricsReport',
    'ProbeResult',
    'StratumMetrics',
    'auc',
    'embeddings_frame',
    'het_sweep',
    'linear_probe_accuracy',
    'metrics_by_stratum',
    'pca2',
    'safe_auc',
    'window_starts',
    'write_embeddings',
    'write_het_sweep',
    'write_metrics_json',
]
