"""
Cohort data model, TSV files, QC and splitting.
"""
from .ancestry import ancestry_stratify, ancestry_variance, heterogeneity_order, stratify_cohort
from .data import MIXED, SUPERPOPULATIONS, GenotypeMatrix, LabeledCohort
from .io import (
    cohort_paths,
    export_cohort,
    load_cohort,
    load_dosage,
    load_labels,
    load_proportions,
    read_scores,
    score_table,
    write_scores,
)
from .prep import age_filter, dichotomize_proxy, filter_samples, stratified_split
from .qc import QcRecord, QcReport, hwe_pvalues, impute_mean, qc_filter

__all__ = [
    'MIXED',
    'SUPERPOPULATIONS',
    'GenotypeMatrix',
    'LabeledCohort',
    'QcRecord',
    'QcReport',
    'age_filter',
    'ancestry_stratify',
    'ancestry_variance',
    'cohort_paths',
    'dichotomize_proxy',
    'export_cohort',
    'filter_samples',
    'heterogeneity_order',
    'hwe_pvalues',
    'impute_mean',
    'load_cohort',
    'load_dosage',
    'load_labels',
    'load_proportions',
    'qc_filter',
    'read_scores',
    'score_table',
    'stratified_split',
    'stratify_cohort',
    'write_scores',
]
