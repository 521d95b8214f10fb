"""
Command line argument handling.
"""
import argparse
from pathlib import Path
from typing import List, Optional

from errors import UsageError
from .defaults import DEFAULT_CONFIG_PATH

SUBCOMMANDS = (
    "simulate", "qc", "split", "train-dae", "embed", "fit-head",
    "fit-baseline", "fit-ensemble", "predict", "evaluate", "het-sweep",
)
BASELINES = ("lasso", "nn", "prs", "adv")
ENSEMBLE_MODES = {"grid": "grid", "grad": "gradient"}


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting with status 2."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def parse_seed(value: str) -> int:
    """Parse and validate an unsigned 64-bit seed."""
    try:
        seed = int(value)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got: {value}") from e
    if not 0 <= seed < 2 ** 64:
        raise argparse.ArgumentTypeError(f"seed must be in [0, 2^64), got: {value}")
    return seed


def parse_positive_int(value: str) -> int:
    try:
        number = int(value)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got: {value}") from e
    if number <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got: {value}")
    return number


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "-c", "--config",
        type=Path,
        help=f"Path to configuration file (default: $DISPRED_CONFIG, else {DEFAULT_CONFIG_PATH} when present)"
    )
    common.add_argument("--seed", type=parse_seed, help="Override the run seed")
    common.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        help="Override the logging level"
    )
    common.add_argument("--out", type=Path, help="Output directory")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = _Parser(
        prog="dispred",
        description="Ancestry-disentangled genetic risk prediction",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], help=help_text,
                              formatter_class=argparse.ArgumentDefaultsHelpFormatter)

    p = add("simulate", "Simulate an admixed cohort")
    p.add_argument("--shift", action="store_true",
                   help="Also write shifted.* drawn with negated ancestry offsets")

    p = add("qc", "Variant QC, phenotype preparation and mean imputation")
    p.add_argument("--data", required=True, help="Cohort prefix (prefix.dosage.tsv, ...) or directory")

    p = add("split", "Stratified train/validation/test split")
    p.add_argument("--data", required=True, help="Cohort prefix or directory")

    p = add("train-dae", "Train the disentangling autoencoder")
    p.add_argument("--data", required=True, help="Training cohort prefix")
    p.add_argument("--val", help="Validation cohort prefix (enables validation AUC)")
    p.add_argument("--preset", choices=["adsp", "ukb"], help="Named hyperparameter preset")
    p.add_argument("--search", action="store_true", help="Search the documented hyperparameter grid")

    p = add("embed", "Export latent representations and their 2-D projections")
    p.add_argument("--model", type=Path, required=True, help="Autoencoder checkpoint")
    p.add_argument("--data", required=True, help="Cohort prefix")

    p = add("fit-head", "Fit the linear head on the phenotype latent")
    p.add_argument("--model", type=Path, required=True, help="Autoencoder checkpoint")
    p.add_argument("--data", required=True, help="Training cohort prefix")

    p = add("fit-baseline", "Fit a baseline predictor on raw dosages")
    p.add_argument("method", choices=BASELINES)
    p.add_argument("--data", required=True, help="Training cohort prefix")
    p.add_argument("--weights", type=Path, help="PRS effect-size table (variant_id, beta)")
    p.add_argument("--train-ancestry", metavar="NAME",
                   help="Fit on samples of one ancestry only (label column, else proportion stratum)")

    p = add("fit-ensemble", "Fit the ensemble weights on validation scores")
    p.add_argument("method", choices=sorted(ENSEMBLE_MODES))
    p.add_argument("--scores-z", type=Path, required=True, help="Latent-head scores on validation data")
    p.add_argument("--scores-x", type=Path, required=True, help="Raw-data model scores on validation data")
    p.add_argument("--data", required=True, help="Validation cohort prefix (labels)")

    p = add("predict", "Score a cohort with a fitted model")
    p.add_argument("--model", type=Path, required=True, help="Fitted model file")
    p.add_argument("--encoder", type=Path, help="Autoencoder checkpoint for latent heads")
    p.add_argument("--data", help="Cohort prefix")
    p.add_argument("--scores-z", type=Path, help="Latent-head scores (ensemble models)")
    p.add_argument("--scores-x", type=Path, help="Raw-data model scores (ensemble models)")
    p.add_argument("--name", default="model", help="Model identifier written with the scores")

    p = add("evaluate", "Per-stratum AUC report")
    p.add_argument("--scores", type=Path, required=True, help="Scores TSV (sample_id, score)")
    p.add_argument("--data", required=True, help="Cohort prefix with labels")
    p.add_argument("--cutoff", type=float, help="Ancestry proportion cutoff")
    p.add_argument("--name", help="Model identifier (defaults to the scores file stem)")

    p = add("het-sweep", "Sliding-window AUC along ancestry heterogeneity")
    p.add_argument("--scores", type=Path, action="append", required=True, help="Scores TSV, repeatable")
    p.add_argument("--data", required=True, help="Cohort prefix with labels and proportions")
    p.add_argument("--window", type=parse_positive_int, help="Window size in participants")
    p.add_argument("--stride", type=parse_positive_int, help="Stride in participants")

    return parser


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """Parse command line arguments."""
    args = build_parser().parse_args(argv)
    if args.out is None:
        raise UsageError(f"{args.command}: --out is required")
    return args
