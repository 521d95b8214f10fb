"""
Configuration schema and validation.
"""
import logging
from dataclasses import asdict, dataclass, field
from typing import Optional, Tuple

from errors import ConfigError
from .defaults import *


@dataclass
class TrainConfig:
    """
    Disentangling autoencoder training.

    ``epochs`` is N, ``ramp_start`` N1 and ``ramp_end`` N2: contrastive
    weights are 0 up to N1, ramp linearly to ``alpha_*`` at N2, then hold.
    """
    tau: float = TAU
    alpha_d: float = ALPHA_D
    alpha_a: float = ALPHA_A
    epochs: int = EPOCHS
    ramp_start: int = RAMP_START
    ramp_end: int = RAMP_END
    batch_size: int = BATCH_SIZE
    lr: float = LEARNING_RATE
    z_d_dim: int = Z_D_DIM
    z_a_dim: int = Z_A_DIM
    seed: int = SEED
    val_every: int = VAL_EVERY
    log_every: int = LOG_EVERY
    erase_ancestry: bool = ERASE_ANCESTRY

    def validate(self) -> None:
        if not 0 <= self.ramp_start < self.ramp_end <= self.epochs:
            raise ConfigError(
                f"ramp knots must satisfy 0 <= ramp_start < ramp_end <= epochs, "
                f"got {self.ramp_start}, {self.ramp_end}, {self.epochs}")
        if self.tau <= 0:
            raise ConfigError(f"tau must be positive, got {self.tau}")
        if self.alpha_d < 0 or self.alpha_a < 0:
            raise ConfigError("alpha_d and alpha_a must be non-negative")
        if self.batch_size < 2:
            raise ConfigError(f"batch_size must be at least 2, got {self.batch_size}")
        if self.lr < 0:
            raise ConfigError(f"lr must be non-negative, got {self.lr}")
        if self.z_d_dim < 1 or self.z_a_dim < 1:
            raise ConfigError("latent dimensions must be at least 1")
        if self.val_every < 1 or self.log_every < 1:
            raise ConfigError("val_every and log_every must be positive")


@dataclass
class NNConfig:
    """Supervised network baseline."""
    epochs: int = NN_EPOCHS
    lr: float = NN_LEARNING_RATE
    batch_size: int = NN_BATCH_SIZE
    dropout: float = NN_DROPOUT

    def validate(self) -> None:
        if self.epochs < 1 or self.batch_size < 1:
            raise ConfigError("nn epochs and batch_size must be positive")
        if not 0.0 <= self.dropout < 1.0:
            raise ConfigError(f"nn dropout must be in [0, 1), got {self.dropout}")


@dataclass
class AdvConfig:
    """Wasserstein adversarial baseline."""
    epochs: int = NN_EPOCHS
    lr: float = NN_LEARNING_RATE
    batch_size: int = NN_BATCH_SIZE
    lambda_w: float = ADV_LAMBDA_W
    critic_steps: int = ADV_CRITIC_STEPS
    gp_weight: float = ADV_GP_WEIGHT

    def validate(self) -> None:
        if self.epochs < 1 or self.batch_size < 2:
            raise ConfigError("adv epochs must be positive and batch_size at least 2")
        if self.lambda_w < 0 or self.gp_weight < 0:
            raise ConfigError("adv lambda_w and gp_weight must be non-negative")
        if self.critic_steps < 0:
            raise ConfigError("adv critic_steps must be non-negative")


@dataclass
class LassoConfig:
    n_alphas: int = LASSO_N_ALPHAS
    max_iter: int = LASSO_MAX_ITER
    tol: float = LASSO_TOL
    folds: int = LASSO_FOLDS
    path_ratio: float = LASSO_PATH_RATIO

    def validate(self) -> None:
        if self.n_alphas < 1 or self.max_iter < 1 or self.folds < 2:
            raise ConfigError("lasso n_alphas and max_iter must be positive, folds at least 2")
        if not 0.0 < self.path_ratio < 1.0:
            raise ConfigError(f"lasso path_ratio must be in (0, 1), got {self.path_ratio}")


@dataclass
class EnsembleConfig:
    mode: str = "grid"
    init: Tuple[float, float] = ENSEMBLE_INIT
    epochs: int = ENSEMBLE_EPOCHS
    lr: float = ENSEMBLE_LR

    def validate(self) -> None:
        if self.mode not in ("grid", "gradient"):
            raise ConfigError(f"ensemble mode must be grid or gradient, got {self.mode}")
        if len(self.init) != 2:
            raise ConfigError("ensemble init must be a pair (alpha, beta)")
        if self.epochs < 1 or self.lr <= 0:
            raise ConfigError("ensemble epochs and lr must be positive")


@dataclass
class SimConfig:
    """
    Balding-Nichols admixture simulator.

    ``fst`` and ``dirichlet`` take one value per population, or a single
    value shared by all of them.
    """
    n_populations: int = SIM_POPULATIONS
    n_variants: int = SIM_VARIANTS
    n_samples: int = SIM_SAMPLES
    fst: Tuple[float, ...] = (SIM_FST,)
    n_causal: int = SIM_CAUSAL
    effect_scale: float = SIM_EFFECT_SCALE
    confound: float = SIM_CONFOUND
    dirichlet: Tuple[float, ...] = (SIM_DIRICHLET,)
    offsets: Optional[Tuple[float, ...]] = None
    prevalence: float = SIM_PREVALENCE
    age_range: Tuple[int, int] = SIM_AGE_RANGE
    seed: int = SEED

    def validate(self) -> None:
        k = self.n_populations
        if not 2 <= k <= 5:
            raise ConfigError(f"n_populations must be between 2 and 5, got {k}")
        if self.n_variants < 1 or self.n_samples < 2:
            raise ConfigError("n_variants must be positive and n_samples at least 2")
        if not 0 <= self.n_causal <= self.n_variants:
            raise ConfigError(f"n_causal must be in [0, n_variants], got {self.n_causal}")
        if len(self.fst) not in (1, k) or any(not 0.0 < f < 1.0 for f in self.fst):
            raise ConfigError(f"fst needs 1 or {k} values in (0, 1), got {self.fst}")
        if len(self.dirichlet) not in (1, k) or any(a <= 0 for a in self.dirichlet):
            raise ConfigError(f"dirichlet needs 1 or {k} positive values, got {self.dirichlet}")
        if self.offsets is not None and len(self.offsets) != k:
            raise ConfigError(f"offsets needs {k} values, got {self.offsets}")
        if not 0.0 < self.prevalence < 1.0:
            raise ConfigError(f"prevalence must be in (0, 1), got {self.prevalence}")
        if self.effect_scale < 0:
            raise ConfigError("effect_scale must be non-negative")
        if len(self.age_range) != 2 or self.age_range[0] > self.age_range[1]:
            raise ConfigError(f"age_range must be (low, high) with low <= high, got {self.age_range}")

    def per_population(self, values: Tuple[float, ...]) -> Tuple[float, ...]:
        return tuple(values) * self.n_populations if len(values) == 1 else tuple(values)


@dataclass
class QcThresholds:
    max_missing_rate: float = MAX_MISSING_RATE
    min_maf: float = MIN_MAF
    hwe_p_floor: float = HWE_P_FLOOR

    def validate(self) -> None:
        for name in ("max_missing_rate", "min_maf", "hwe_p_floor"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"qc {name} must be in [0, 1], got {value}")


@dataclass
class CohortPrepConfig:
    """Optional phenotype preparation applied by the qc stage."""
    dichotomize_threshold: Optional[float] = None
    min_age: Optional[int] = None

    def validate(self) -> None:
        if self.min_age is not None and self.min_age < 0:
            raise ConfigError("min_age must be non-negative")


@dataclass
class SplitConfig:
    fractions: Tuple[float, float, float] = SPLIT_FRACTIONS

    def validate(self) -> None:
        if len(self.fractions) != 3 or any(f <= 0 for f in self.fractions):
            raise ConfigError(f"split fractions must be three positive values, got {self.fractions}")
        if abs(sum(self.fractions) - 1.0) > 1e-9:
            raise ConfigError(f"split fractions must sum to 1, got {sum(self.fractions)}")


@dataclass
class EvalConfig:
    cutoff: float = ANCESTRY_CUTOFF
    window: int = HET_WINDOW
    stride: int = HET_STRIDE

    def validate(self) -> None:
        if not 0.5 <= self.cutoff < 1.0:
            raise ConfigError(f"ancestry cutoff must be in [0.5, 1), got {self.cutoff}")
        if self.window < 1 or self.stride < 1:
            raise ConfigError("window and stride must be positive")


@dataclass
class RunConfig:
    """Application configuration."""
    seed: int = SEED
    log_level: str = LOG_LEVEL
    train: TrainConfig = field(default_factory=TrainConfig)
    nn: NNConfig = field(default_factory=NNConfig)
    adv: AdvConfig = field(default_factory=AdvConfig)
    lasso: LassoConfig = field(default_factory=LassoConfig)
    ensemble: EnsembleConfig = field(default_factory=EnsembleConfig)
    sim: SimConfig = field(default_factory=SimConfig)
    qc: QcThresholds = field(default_factory=QcThresholds)
    prep: CohortPrepConfig = field(default_factory=CohortPrepConfig)
    split: SplitConfig = field(default_factory=SplitConfig)
    eval: EvalConfig = field(default_factory=EvalConfig)

    SECTIONS = ("train", "nn", "adv", "lasso", "ensemble", "sim", "qc", "prep", "split", "eval")

    def validate(self) -> None:
        """
        Validate the configuration after all sources have been loaded.
        Raises ConfigError if any field is invalid.
        """
        if self.seed < 0:
            raise ConfigError(f"seed must be non-negative, got {self.seed}")
        if self.log_level.upper() not in logging._nameToLevel:
            raise ConfigError(f"Invalid log level: {self.log_level}")
        for section in self.SECTIONS:
            getattr(self, section).validate()

    def with_seed(self, seed: int) -> "RunConfig":
        """Propagate the run seed into the seeded sections."""
        self.seed = seed
        self.train.seed = seed
        self.sim.seed = seed
        return self

    def to_dict(self) -> dict:
        return asdict(self)
