"""
Balding-Nichols admixture simulator.

Population allele frequencies scatter around an ancestral frequency with a
Beta distribution set by each population's Fst. Individuals mix the
populations with Dirichlet proportions; the phenotype thresholds a
liability built from shared causal effects, an ancestry-dependent offset
and Gaussian noise.
"""
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional, Tuple, Union

import numpy as np

from cohort import SUPERPOPULATIONS, GenotypeMatrix, LabeledCohort, export_cohort
from config import SimConfig
from errors import ConfigError
from nncore import RngStream

logger = logging.getLogger(__name__)

ANCESTRAL_FREQ_RANGE = (0.05, 0.95)


@dataclass
class PopulationModel:
    """Allele frequencies and causal effects shared by every cohort drawn from one config."""
    ancestral: np.ndarray
    frequencies: np.ndarray
    causal: np.ndarray
    effects: np.ndarray
    names: Tuple[str, ...]

    @property
    def n_populations(self) -> int:
        return self.frequencies.shape[0]

    @property
    def n_variants(self) -> int:
        return self.frequencies.shape[1]


def default_offsets(k: int) -> np.ndarray:
    return np.linspace(1.0, -1.0, k)


def draw_population_model(config: SimConfig, rng: RngStream) -> PopulationModel:
    config.validate()
    k, m = config.n_populations, config.n_variants
    fst = np.asarray(config.per_population(config.fst), dtype=np.float64)
    ancestral = rng.uniform(*ANCESTRAL_FREQ_RANGE, size=m)
    scale = ((1.0 - fst) / fst)[:, None]
    frequencies = rng.generator.beta(ancestral[None, :] * scale, (1.0 - ancestral[None, :]) * scale, size=(k, m))
    causal = np.sort(rng.generator.choice(m, size=config.n_causal, replace=False))
    effects = rng.normal(0.0, config.effect_scale, size=config.n_causal)
    return PopulationModel(ancestral, frequencies, causal, effects, SUPERPOPULATIONS[:k])


def sample_genotypes(model: PopulationModel, proportions: np.ndarray, rng: RngStream) -> np.ndarray:
    """Binomial(2, q_i . f_m) dosages for admixture proportions ``proportions``."""
    individual = np.clip(proportions @ model.frequencies, 0.0, 1.0)
    return rng.generator.binomial(2, individual).astype(np.float64)


def _standardize(dosages: np.ndarray) -> np.ndarray:
    std = dosages.std(axis=0)
    centered = dosages - dosages.mean(axis=0)
    return np.divide(centered, std, out=np.zeros_like(centered), where=std > 0)


def _draw_cohort(config: SimConfig, model: PopulationModel, offsets: np.ndarray, rng: RngStream,
                 id_prefix: str) -> LabeledCohort:
    n = config.n_samples
    concentration = np.asarray(config.per_population(config.dirichlet), dtype=np.float64)
    proportions = rng.generator.dirichlet(concentration, size=n)
    proportions = proportions / proportions.sum(axis=1, keepdims=True)
    dosages = sample_genotypes(model, proportions, rng)

    genetic = _standardize(dosages[:, model.causal]) @ model.effects
    confound = config.confound * (proportions @ offsets)
    liability = genetic + confound + rng.normal(size=n)
    threshold = np.quantile(liability, 1.0 - config.prevalence)
    y = (liability > threshold).astype(np.float64)

    low, high = config.age_range
    age = rng.generator.integers(low, high + 1, size=n).astype(np.float64)
    ancestry = np.asarray(model.names, dtype=object)[np.argmax(proportions, axis=1)]

    genotypes = GenotypeMatrix(
        [f"{id_prefix}{i + 1:05d}" for i in range(n)],
        [f"v{j + 1:05d}" for j in range(model.n_variants)],
        dosages,
    )
    return LabeledCohort(genotypes=genotypes, y=y, ancestry=ancestry, proportions=proportions,
                         proportion_names=model.names, age=age)


def _offsets(config: SimConfig) -> np.ndarray:
    if config.offsets is None:
        return default_offsets(config.n_populations)
    offsets = np.asarray(config.offsets, dtype=np.float64)
    if offsets.size != config.n_populations:
        raise ConfigError(f"offsets needs {config.n_populations} values, got {offsets.size}")
    return offsets


def simulate_cohort(config: SimConfig) -> LabeledCohort:
    """Draw a cohort with true admixture proportions and argmax ancestry labels."""
    model_rng, sample_rng, _ = RngStream(config.seed).spawn(3)
    model = draw_population_model(config, model_rng)
    cohort = _draw_cohort(config, model, _offsets(config), sample_rng, "S")
    logger.info(
        f"Simulated {cohort.n_samples} samples x {model.n_variants} variants over "
        f"{model.n_populations} populations ({int(cohort.y.sum())} cases)")
    return cohort


def simulate_shift_pair(config: SimConfig) -> Tuple[LabeledCohort, LabeledCohort]:
    """
    A cohort and a second cohort from the same populations and causal effects
    but with negated ancestry offsets, so the ancestry-phenotype association flips.

    The first cohort equals ``simulate_cohort(config)``.
    """
    model_rng, sample_rng, shift_rng = RngStream(config.seed).spawn(3)
    model = draw_population_model(config, model_rng)
    offsets = _offsets(config)
    base = _draw_cohort(config, model, offsets, sample_rng, "S")
    shifted = _draw_cohort(config, model, -offsets, shift_rng, "T")
    return base, shifted


def export(cohort: LabeledCohort, directory: Union[str, Path], name: Optional[str] = None) -> Dict[str, Path]:
    return export_cohort(cohort, directory, name)
