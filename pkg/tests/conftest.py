"""
Shared fixtures: small simulated cohorts, random streams and tiny networks.
"""
import pytest
import yaml

from cohort import stratified_split
from config import SimConfig
from disentangle import DisentangledModel
from nncore import MLP, AffineLayer, LayerSpec, RngStream
from simdata import simulate_cohort

SMALL_SIM = dict(n_populations=3, n_variants=40, n_samples=300, n_causal=8, seed=11)

# Relative-error bound for finite-difference checks, and the gradient
# magnitude below which differences are judged absolutely.
GRAD_TOL = 1e-4
GRAD_FLOOR = 1e-5


def small_autoencoder(input_dim: int = 6, z_d_dim: int = 3, z_a_dim: int = 2, seed: int = 0) -> DisentangledModel:
    """Same topology as the full model with narrow hidden layers."""
    rng = RngStream(seed)
    trunk = MLP.build([LayerSpec("fc1", input_dim, 8), LayerSpec("fc2", 8, 7)], rng)
    head_d = AffineLayer.initialize(7, z_d_dim, "identity", rng)
    head_a = AffineLayer.initialize(7, z_a_dim, "identity", rng)
    decoder = MLP.build([
        LayerSpec("fc4", z_d_dim + z_a_dim, 7),
        LayerSpec("fc5", 7, 8),
        LayerSpec("fc6", 8, input_dim),
    ], rng)
    return DisentangledModel(trunk=trunk, head_d=head_d, head_a=head_a, decoder=decoder)


@pytest.fixture
def rng():
    return RngStream(1234)


@pytest.fixture(scope="session")
def small_cohort():
    return simulate_cohort(SimConfig(**SMALL_SIM))


@pytest.fixture(scope="session")
def small_split(small_cohort):
    return stratified_split(small_cohort, (0.6, 0.2, 0.2), seed=3)


@pytest.fixture
def small_config_file(tmp_path):
    """A run configuration small enough for end-to-end command tests."""
    path = tmp_path / "run.yaml"
    path.write_text(yaml.safe_dump({
        "log_level": "WARNING",
        "sim": {"n_populations": 3, "n_variants": 30, "n_samples": 400, "n_causal": 6},
        "train": {"epochs": 3, "ramp_start": 1, "ramp_end": 2, "batch_size": 64,
                  "z_d_dim": 4, "z_a_dim": 3, "tau": 0.5, "val_every": 1, "log_every": 1},
        "lasso": {"n_alphas": 4, "folds": 3},
        "nn": {"epochs": 2, "batch_size": 64},
        "adv": {"epochs": 2, "batch_size": 64, "critic_steps": 1},
        "ensemble": {"epochs": 50},
        "qc": {"hwe_p_floor": 0.0},
        "split": {"fractions": [0.6, 0.2, 0.2]},
        "eval": {"window": 40, "stride": 10},
    }))
    return path


@pytest.fixture
def isolated_env(monkeypatch, tmp_path):
    """No DISPRED_* variables and a clean working directory; anything a .env file sets is undone."""
    for name in ("DISPRED_CONFIG", "DISPRED_SEED", "DISPRED_LOG_LEVEL"):
        monkeypatch.setenv(name, "")
        monkeypatch.delenv(name)
    monkeypatch.chdir(tmp_path)
