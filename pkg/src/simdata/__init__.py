"""
Synthetic admixed cohorts.
"""
from .simulator import (
    PopulationModel,
    default_offsets,
    draw_population_model,
    export,
    sample_genotypes,
    simulate_cohort,
    simulate_shift_pair,
)

__all__ = [
    'PopulationModel',
    'default_offsets',
    'draw_population_model',
    'export',
    'sample_genotypes',
    'simulate_cohort',
    'simulate_shift_pair',
]
