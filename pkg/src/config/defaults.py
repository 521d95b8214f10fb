"""
Default configuration values.
"""
from pathlib import Path

# Default configuration file path
DEFAULT_CONFIG_PATH = Path("settings.yaml")

# Application defaults
LOG_LEVEL = "INFO"
SEED = 0

# Disentangling autoencoder (ADSP values)
TAU = 0.03
ALPHA_D = 1e-4
ALPHA_A = 1e-4
EPOCHS = 500
RAMP_START = 100
RAMP_END = 250
BATCH_SIZE = 256
LEARNING_RATE = 5e-3
Z_D_DIM = 40
Z_A_DIM = 40
VAL_EVERY = 10
LOG_EVERY = 10
ERASE_ANCESTRY = True

# Documented hyperparameter grid for the autoencoder
SEARCH_GRID = {
    "z_d_dim": [30, 40, 50],
    "z_a_dim": [30, 40, 50],
    "tau": [0.03, 0.05],
    "alpha": [1e-4, 3e-4],
}

TRAIN_PRESETS = {
    "adsp": {"epochs": 500, "ramp_start": 100, "ramp_end": 250, "batch_size": 256,
             "z_d_dim": 40, "z_a_dim": 40, "tau": 0.03, "alpha_d": 1e-4, "alpha_a": 1e-4},
    "ukb": {"epochs": 100, "ramp_start": 10, "ramp_end": 70, "batch_size": 256,
            "z_d_dim": 40, "z_a_dim": 30, "tau": 0.05, "alpha_d": 1e-4, "alpha_a": 1e-4},
}

# Supervised network baseline
NN_EPOCHS = 200
NN_LEARNING_RATE = 5e-3
NN_BATCH_SIZE = 64
NN_DROPOUT = 0.5

NN_PRESETS = {
    "adsp": {"epochs": 200, "lr": 5e-3, "batch_size": 64},
    "ukb": {"epochs": 100, "lr": 5e-3, "batch_size": 256},
}

# Wasserstein adversarial baseline
ADV_LAMBDA_W = 0.1
ADV_CRITIC_STEPS = 5
ADV_GP_WEIGHT = 10.0

# Lasso
LASSO_N_ALPHAS = 10
LASSO_MAX_ITER = 5000
LASSO_TOL = 1e-3
LASSO_FOLDS = 5
LASSO_PATH_RATIO = 1e-3

# Ensemble
ENSEMBLE_INIT = (1.1, 0.9)
ENSEMBLE_EPOCHS = 5000
ENSEMBLE_LR = 0.01

# Simulator
SIM_POPULATIONS = 3
SIM_VARIANTS = 500
SIM_SAMPLES = 3000
SIM_FST = 0.1
SIM_CAUSAL = 30
SIM_EFFECT_SCALE = 0.2
SIM_CONFOUND = 1.0
SIM_DIRICHLET = 0.2
SIM_PREVALENCE = 0.3
SIM_AGE_RANGE = (55, 90)

# Cohort preparation
MAX_MISSING_RATE = 0.10
MIN_MAF = 0.01
HWE_P_FLOOR = 1e-5
PROXY_THRESHOLD = 2.0
MIN_CONTROL_AGE = 65
SPLIT_FRACTIONS = (0.8, 0.1, 0.1)

# Evaluation
ANCESTRY_CUTOFF = 0.9
HET_WINDOW = 750
HET_STRIDE = 50
