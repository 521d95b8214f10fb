import pytest
import yaml

from config import RunConfig, dump_config, load_config, load_yaml_config, parse_args
from errors import ConfigError, UsageError

pytestmark = pytest.mark.usefixtures("isolated_env")


def write_config(path, values):
    path.write_text(yaml.safe_dump(values))
    return path


class TestPrecedence:
    def test_defaults_without_file(self):
        config = load_config()
        assert config.seed == 0
        assert config.train.tau == RunConfig().train.tau

    def test_file_overrides_defaults(self, tmp_path):
        path = write_config(tmp_path / "c.yaml", {"seed": 3, "train": {"epochs": 7, "ramp_start": 1, "ramp_end": 5}})
        config = load_config(config_path=path)
        assert config.seed == 3 and config.train.seed == 3 and config.sim.seed == 3
        assert config.train.epochs == 7

    def test_environment_overrides_file(self, tmp_path, monkeypatch):
        path = write_config(tmp_path / "c.yaml", {"seed": 3, "log_level": "INFO"})
        monkeypatch.setenv("DISPRED_SEED", "9")
        monkeypatch.setenv("DISPRED_LOG_LEVEL", "DEBUG")
        config = load_config(config_path=path)
        assert config.seed == 9 and config.log_level == "DEBUG"

    def test_command_line_overrides_environment(self, tmp_path, monkeypatch):
        path = write_config(tmp_path / "c.yaml", {"seed": 3})
        monkeypatch.setenv("DISPRED_SEED", "9")
        args = parse_args(["simulate", "-c", str(path), "--out", str(tmp_path / "out"), "--seed", "5"])
        assert load_config(args).seed == 5

    def test_dotenv_file(self, tmp_path):
        (tmp_path / ".env").write_text("DISPRED_SEED=17\n")
        assert load_config().seed == 17

    def test_preset(self, tmp_path):
        path = write_config(tmp_path / "c.yaml", {"train": {"preset": "ukb"}})
        config = load_config(config_path=path)
        assert (config.train.epochs, config.train.ramp_start, config.train.ramp_end) == (100, 10, 70)
        assert config.nn.batch_size == 256

    def test_evaluation_flags(self, tmp_path):
        args = parse_args(["het-sweep", "--scores", "a.tsv", "--data", "d", "--out", "o",
                           "--window", "40", "--stride", "10"])
        config = load_config(args)
        assert (config.eval.window, config.eval.stride) == (40, 10)


class TestConfigFile:
    def test_settings_file_in_working_directory(self, tmp_path):
        write_config(tmp_path / "settings.yaml", {"seed": 6})
        assert load_config().seed == 6

    def test_environment_names_the_file(self, tmp_path, monkeypatch):
        write_config(tmp_path / "settings.yaml", {"seed": 6})
        monkeypatch.setenv("DISPRED_CONFIG", str(write_config(tmp_path / "other.yaml", {"seed": 8})))
        assert load_config().seed == 8

    def test_missing_named_file(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            load_config(config_path=tmp_path / "absent.yaml")

    def test_missing_file_given_with_flag(self, tmp_path):
        args = parse_args(["simulate", "-c", str(tmp_path / "absent.yaml"), "--out", str(tmp_path / "out")])
        with pytest.raises(ConfigError):
            load_config(args)

    def test_missing_file_named_by_environment(self, tmp_path, monkeypatch):
        monkeypatch.setenv("DISPRED_CONFIG", str(tmp_path / "absent.yaml"))
        with pytest.raises(ConfigError):
            load_config()

    def test_optional_lookup_returns_none(self, tmp_path):
        assert load_yaml_config(tmp_path / "absent.yaml") is None


class TestValidation:
    def test_unknown_section(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(config_path=write_config(tmp_path / "c.yaml", {"training": {}}))

    def test_unknown_key(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(config_path=write_config(tmp_path / "c.yaml", {"train": {"epoch": 5}}))

    def test_ramp_must_fit_epochs(self, tmp_path):
        path = write_config(tmp_path / "c.yaml", {"train": {"epochs": 10, "ramp_start": 5, "ramp_end": 20}})
        with pytest.raises(ConfigError):
            load_config(config_path=path)

    def test_bad_seed_in_environment(self, monkeypatch):
        monkeypatch.setenv("DISPRED_SEED", "-4")
        with pytest.raises(ConfigError):
            load_config()

    def test_split_fractions(self, tmp_path):
        path = write_config(tmp_path / "c.yaml", {"split": {"fractions": [0.5, 0.4, 0.2]}})
        with pytest.raises(ConfigError):
            load_config(config_path=path)

    def test_broken_yaml(self, tmp_path):
        path = tmp_path / "c.yaml"
        path.write_text("train: [unclosed\n")
        with pytest.raises(ConfigError):
            load_yaml_config(path)

    def test_dump_round_trip(self, tmp_path):
        config = load_config(config_path=write_config(tmp_path / "c.yaml", {"seed": 4, "eval": {"window": 60}}))
        path = tmp_path / "echo.yaml"
        path.write_text(dump_config(config))
        assert load_yaml_config(path) == config


class TestArguments:
    def test_out_is_required(self):
        with pytest.raises(UsageError):
            parse_args(["simulate"])

    def test_unknown_command(self):
        with pytest.raises(UsageError):
            parse_args(["launch", "--out", "o"])

    def test_baseline_choice(self):
        with pytest.raises(UsageError):
            parse_args(["fit-baseline", "svm", "--data", "d", "--out", "o"])

    def test_negative_seed(self):
        with pytest.raises(UsageError):
            parse_args(["simulate", "--out", "o", "--seed", "-1"])
