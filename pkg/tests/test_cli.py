import json

import pytest

from cohort import load_cohort
from main import run

pytestmark = pytest.mark.usefixtures("isolated_env")


def dispred(config, out, *args) -> int:
    return run([*args, "-c", str(config), "--out", str(out)])


def error_line(capsys) -> str:
    lines = [line for line in capsys.readouterr().err.splitlines() if line.startswith("dispred-error")]
    assert len(lines) == 1
    return lines[0]


def run_pipeline(config, root):
    """Every stage on a small simulated cohort, all artifacts in one directory."""
    work = root / "work"
    steps = [
        ["simulate"],
        ["qc", "--data", str(work / "cohort")],
        ["split", "--data", str(work / "qc")],
        ["train-dae", "--data", str(work / "train"), "--val", str(work / "val")],
        ["embed", "--model", str(work / "model.ckpt"), "--data", str(work / "test")],
        ["fit-head", "--model", str(work / "model.ckpt"), "--data", str(work / "train")],
        ["fit-baseline", "lasso", "--data", str(work / "train")],
    ]
    for split in ("val", "test"):
        steps.append(["predict", "--model", str(work / "head.yaml"), "--encoder", str(work / "model.ckpt"),
                      "--data", str(work / split), "--name", f"head.{split}"])
        steps.append(["predict", "--model", str(work / "lasso.yaml"), "--data", str(work / split),
                      "--name", f"lasso.{split}"])
    steps += [
        ["fit-ensemble", "grid", "--scores-z", str(work / "head.val.scores.tsv"),
         "--scores-x", str(work / "lasso.val.scores.tsv"), "--data", str(work / "val")],
        ["predict", "--model", str(work / "ensemble.yaml"), "--scores-z", str(work / "head.test.scores.tsv"),
         "--scores-x", str(work / "lasso.test.scores.tsv"), "--name", "ens"],
        ["evaluate", "--scores", str(work / "ens.scores.tsv"), "--data", str(work / "test")],
        ["het-sweep", "--scores", str(work / "ens.scores.tsv"), "--scores", str(work / "lasso.test.scores.tsv"),
         "--data", str(work / "test")],
    ]
    for step in steps:
        assert dispred(config, work, *step) == 0, step
    return work


class TestCommands:
    def test_simulate_is_reproducible(self, small_config_file, tmp_path):
        assert dispred(small_config_file, tmp_path / "a", "simulate") == 0
        assert dispred(small_config_file, tmp_path / "b", "simulate") == 0
        for kind in ("dosage", "labels", "proportions"):
            name = f"cohort.{kind}.tsv"
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
        assert (tmp_path / "a" / "config.yaml").exists()

    def test_seed_flag_changes_cohort(self, small_config_file, tmp_path):
        assert dispred(small_config_file, tmp_path / "a", "simulate") == 0
        assert dispred(small_config_file, tmp_path / "b", "simulate", "--seed", "1") == 0
        name = "cohort.dosage.tsv"
        assert (tmp_path / "a" / name).read_bytes() != (tmp_path / "b" / name).read_bytes()

    def test_missing_output_directory_is_usage_error(self, capsys):
        assert run(["simulate"]) == 1
        assert "kind=usage exit=1" in error_line(capsys)

    def test_unknown_subcommand(self, capsys):
        assert run(["launch"]) == 1
        assert "kind=usage" in error_line(capsys)

    def test_unknown_config_key(self, tmp_path, capsys):
        config = tmp_path / "bad.yaml"
        config.write_text("train:\n  epoch: 3\n")
        assert dispred(config, tmp_path / "out", "simulate") == 2
        assert "kind=config exit=2" in error_line(capsys)

    def test_missing_config_file(self, tmp_path, capsys):
        assert dispred(tmp_path / "absent.yaml", tmp_path / "out", "simulate") == 2
        assert "kind=config exit=2" in error_line(capsys)

    def test_simulate_shifted_pair(self, small_config_file, tmp_path):
        assert dispred(small_config_file, tmp_path / "a", "simulate") == 0
        assert dispred(small_config_file, tmp_path / "b", "simulate", "--shift") == 0
        for kind in ("dosage", "labels", "proportions"):
            assert (tmp_path / "b" / f"shifted.{kind}.tsv").exists()
            name = f"cohort.{kind}.tsv"
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
        shifted = load_cohort(tmp_path / "b" / "shifted")
        assert shifted.n_samples == 400
        assert shifted.sample_ids[0].startswith("T")

    def test_lasso_on_one_ancestry(self, small_config_file, tmp_path):
        assert dispred(small_config_file, tmp_path / "a", "simulate") == 0
        cohort = tmp_path / "a" / "cohort"
        assert dispred(small_config_file, tmp_path / "b", "fit-baseline", "lasso", "--data", str(cohort),
                       "--train-ancestry", "EUR") == 0
        assert (tmp_path / "b" / "lasso.yaml").exists()

    def test_unknown_training_ancestry(self, small_config_file, tmp_path, capsys):
        assert dispred(small_config_file, tmp_path / "a", "simulate") == 0
        code = dispred(small_config_file, tmp_path / "b", "fit-baseline", "lasso",
                       "--data", str(tmp_path / "a" / "cohort"), "--train-ancestry", "XYZ")
        assert code == 2
        assert "kind=data" in error_line(capsys)

    def test_single_class_evaluation(self, small_config_file, tmp_path, capsys):
        (tmp_path / "c.dosage.tsv").write_text("sample_id\tv1\na\t0\nb\t1\nc\t2\n")
        (tmp_path / "c.labels.tsv").write_text("sample_id\tphenotype\na\t0\nb\t0\nc\t0\n")
        (tmp_path / "m.scores.tsv").write_text("sample_id\tscore\na\t0.1\nb\t0.2\nc\t0.3\n")
        code = dispred(small_config_file, tmp_path / "out", "evaluate",
                       "--scores", str(tmp_path / "m.scores.tsv"), "--data", str(tmp_path / "c"))
        assert code == 2
        line = error_line(capsys)
        assert "kind=undefined-auc exit=2" in line
        assert not (tmp_path / "out" / "metrics.json").exists()

    def test_dosage_out_of_range(self, small_config_file, tmp_path, capsys):
        (tmp_path / "c.dosage.tsv").write_text("sample_id\tv1\na\t0\nb\t3\n")
        (tmp_path / "c.labels.tsv").write_text("sample_id\tphenotype\na\t0\nb\t1\n")
        assert dispred(small_config_file, tmp_path / "out", "qc", "--data", str(tmp_path / "c")) == 2
        assert "kind=range" in error_line(capsys)

    def test_prs_needs_weights(self, small_config_file, tmp_path, capsys):
        assert dispred(small_config_file, tmp_path / "a", "simulate") == 0
        code = dispred(small_config_file, tmp_path / "b", "fit-baseline", "prs", "--data", str(tmp_path / "a" / "cohort"))
        assert code == 1
        assert "kind=usage" in error_line(capsys)

    def test_prs_with_absent_variant(self, small_config_file, tmp_path, capsys):
        assert dispred(small_config_file, tmp_path / "a", "simulate") == 0
        weights = tmp_path / "w.tsv"
        weights.write_text("variant_id\tbeta\nv00001\t0.5\nrs999\t0.1\n")
        code = dispred(small_config_file, tmp_path / "b", "fit-baseline", "prs",
                       "--data", str(tmp_path / "a" / "cohort"), "--weights", str(weights))
        assert code == 2
        line = error_line(capsys)
        assert "kind=missing-variant" in line and "rs999" in line


@pytest.mark.slow
class TestPipeline:
    def test_end_to_end_is_deterministic(self, small_config_file, tmp_path):
        first = run_pipeline(small_config_file, tmp_path / "one")
        second = run_pipeline(small_config_file, tmp_path / "two")

        metrics = json.loads((first / "metrics.json").read_text())
        assert metrics["model"] == "ens"
        assert metrics["global"]["n"] == 80
        assert 0.0 <= metrics["global"]["auc"] <= 1.0
        assert (first / "metrics.json").read_bytes() == (second / "metrics.json").read_bytes()
        assert (first / "het_sweep.tsv").read_bytes() == (second / "het_sweep.tsv").read_bytes()

        header = (first / "het_sweep.tsv").read_text().splitlines()[0].split("\t")
        assert header == ["window_start", "window_end", "n_case", "ens", "lasso.test"]
        for name in ("history.tsv", "qc_report.tsv", "lasso_path.tsv", "embeddings.tsv"):
            assert (first / name).exists()
