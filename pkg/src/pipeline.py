"""
PipelineRunner: one handler per command line stage.

Every stage reads its inputs from files, writes its artifacts atomically
into the output directory and echoes the resolved configuration there as
``config.yaml``.
"""
import argparse
import logging
from pathlib import Path
from typing import Callable, Dict, List, Optional

import numpy as np
import pandas as pd

import disentangle
from cohort import (
    LabeledCohort,
    age_filter,
    dichotomize_proxy,
    export_cohort,
    filter_samples,
    heterogeneity_order,
    impute_mean,
    load_cohort,
    qc_filter,
    read_scores,
    score_table,
    stratified_split,
    stratify_cohort,
    write_scores,
)
from config import ENSEMBLE_MODES, RunConfig, save_yaml_config
from errors import DataError, UsageError
from evalkit import het_sweep, metrics_by_stratum, write_embeddings, write_het_sweep, write_metrics_json
from predictors import (
    LATENT,
    EnsembleWeights,
    PrsModel,
    combine,
    fit_adv,
    fit_gradient,
    fit_grid,
    fit_lasso_cv,
    fit_linear_head,
    fit_nn,
    load_model,
    load_prs_weights,
    predict,
    save_linear_model,
    save_network,
    save_prs_weights,
    save_weights,
)
from simdata import export, simulate_cohort, simulate_shift_pair
from utils import atomic_write_text, ensure_directory

logger = logging.getLogger(__name__)

SPLIT_NAMES = ("train", "val", "test")


def _tsv(frame: pd.DataFrame) -> str:
    return frame.to_csv(sep="\t", index=False, float_format="%.17g", na_rep="NA", lineterminator="\n")


def _model_name(scores_path: Path) -> str:
    name = scores_path.name
    for suffix in (".tsv", ".scores"):
        if name.endswith(suffix):
            name = name[: -len(suffix)]
    return name


def _domain_labels(cohort: LabeledCohort) -> np.ndarray:
    """Ancestry labels, falling back to the largest admixture component."""
    if cohort.ancestry is not None:
        return cohort.ancestry
    if cohort.proportions is not None:
        names = np.asarray(cohort.proportion_names, dtype=object)
        return names[np.argmax(cohort.proportions, axis=1)]
    raise DataError("cohort has neither ancestry labels nor ancestry proportions")


def _restrict_to_ancestry(cohort: LabeledCohort, name: str, cutoff: float) -> LabeledCohort:
    """Samples labelled ``name``; without labels, the proportion stratum ``name`` at ``cutoff``."""
    if cohort.ancestry is not None:
        labels = np.asarray(cohort.ancestry).astype(str)
    elif cohort.proportions is not None:
        labels = stratify_cohort(cohort.proportions, cutoff, cohort.proportion_names).astype(str)
    else:
        raise DataError("--train-ancestry needs ancestry labels or ancestry proportions")
    keep = labels == name
    if not keep.any():
        raise DataError(f"no training samples of ancestry {name!r}; found {sorted(set(labels))}")
    return filter_samples(cohort, keep, reason=f"training ancestry {name}")


class PipelineRunner:
    def __init__(self, config: RunConfig, args: argparse.Namespace):
        self.config = config
        self.args = args
        self.out = ensure_directory(args.out)
        self._handlers: Dict[str, Callable[[], List[Path]]] = {
            "simulate": self.simulate,
            "qc": self.qc,
            "split": self.split,
            "train-dae": self.train_dae,
            "embed": self.embed,
            "fit-head": self.fit_head,
            "fit-baseline": self.fit_baseline,
            "fit-ensemble": self.fit_ensemble,
            "predict": self.predict,
            "evaluate": self.evaluate,
            "het-sweep": self.het_sweep,
        }

    def run(self) -> List[Path]:
        """Run the selected stage and return the artifacts it wrote."""
        command = self.args.command
        if command not in self._handlers:
            raise UsageError(f"unknown command: {command}")
        logger.info(f"Starting {command} (seed {self.config.seed}) -> {self.out}")
        artifacts = self._handlers[command]()
        config_path = self.out / "config.yaml"
        save_yaml_config(self.config, config_path)
        artifacts.append(config_path)
        for path in artifacts:
            logger.info(f"Wrote {path}")
        logger.info(f"{command} completed")
        return artifacts

    def _cohort(self, prefix=None, imputed: bool = True, require_proportions: bool = False) -> LabeledCohort:
        cohort = load_cohort(prefix or self.args.data, require_proportions=require_proportions)
        if imputed:
            cohort = cohort.with_genotypes(impute_mean(cohort.genotypes))
        return cohort

    def _encoder(self, path: Optional[Path]) -> disentangle.DisentangledModel:
        if path is None:
            raise UsageError(f"{self.args.command}: a latent-role model needs --encoder")
        return disentangle.load(path)

    # Stages

    def simulate(self) -> List[Path]:
        if not self.args.shift:
            return list(export(simulate_cohort(self.config.sim), self.out, "cohort").values())
        base, shifted = simulate_shift_pair(self.config.sim)
        return [*export(base, self.out, "cohort").values(), *export(shifted, self.out, "shifted").values()]

    def qc(self) -> List[Path]:
        cohort = self._cohort(imputed=False)
        prep = self.config.prep
        if prep.dichotomize_threshold is not None:
            cohort = cohort.with_labels(dichotomize_proxy(cohort.y, prep.dichotomize_threshold))
        if prep.min_age is not None:
            cohort = age_filter(cohort, prep.min_age)
        genotypes, report = qc_filter(cohort.genotypes, cohort.controls, self.config.qc)
        cohort = cohort.with_genotypes(impute_mean(genotypes))
        written = list(export_cohort(cohort, self.out, "qc").values())
        written.append(report.write(self.out / "qc_report.tsv"))
        return written

    def split(self) -> List[Path]:
        cohort = self._cohort(imputed=False)
        parts = stratified_split(cohort, self.config.split.fractions, self.config.seed)
        written = []
        for name, part in zip(SPLIT_NAMES, parts):
            written.extend(export_cohort(part, self.out, name).values())
        return written

    def train_dae(self) -> List[Path]:
        train = self._cohort()
        val = self._cohort(self.args.val) if self.args.val else None
        written = []
        if self.args.search:
            if val is None:
                raise UsageError("train-dae --search needs --val")
            result = disentangle.search_dae(train, val, self.config.train)
            model, history = result.model, result.history
            self.config.train = result.config
            written.append(atomic_write_text(self.out / "search.tsv", _tsv(result.to_frame())))
        else:
            model, history = disentangle.train_dae(train, val, self.config.train)
        written.append(disentangle.save(model, self.out / "model.ckpt"))
        written.append(history.write(self.out / "history.tsv"))
        return written

    def embed(self) -> List[Path]:
        model = disentangle.load(self.args.model)
        cohort = self._cohort()
        z_a, z_d = disentangle.encode(model, cohort.x)
        return [write_embeddings(self.out / "embeddings.tsv", cohort.sample_ids, z_a, z_d, cohort.ancestry)]

    def fit_head(self) -> List[Path]:
        model = disentangle.load(self.args.model)
        cohort = self._cohort()
        _, z_d = disentangle.encode(model, cohort.x)
        head = fit_linear_head(z_d, cohort.y, role=LATENT)
        return [save_linear_model(head, self.out / "head.yaml", encoder_dims=list(model.dims))]

    def fit_baseline(self) -> List[Path]:
        method = self.args.method
        ancestry = self.args.train_ancestry
        if ancestry is not None and method in ("prs", "adv"):
            raise UsageError(f"fit-baseline {method} does not take --train-ancestry")
        if method == "prs":
            if self.args.weights is None:
                raise UsageError("fit-baseline prs needs --weights")
            weights = load_prs_weights(self.args.weights)
            cohort = self._cohort(imputed=False)
            scores = predict(PrsModel(weights), cohort.genotypes)
            return [save_prs_weights(weights, self.out / "prs.tsv"),
                    write_scores(self.out / "prs.train.scores.tsv", cohort.sample_ids, scores)]

        cohort = self._cohort(imputed=ancestry is None)
        if ancestry is not None:
            cohort = _restrict_to_ancestry(cohort, ancestry, self.config.eval.cutoff)
            cohort = cohort.with_genotypes(impute_mean(cohort.genotypes))
        X, y, names = cohort.x, cohort.y, cohort.genotypes.variant_ids
        seed = self.config.seed
        if method == "lasso":
            lasso = self.config.lasso
            fit = fit_lasso_cv(X, y, n_alphas=lasso.n_alphas, max_iter=lasso.max_iter, tol=lasso.tol,
                               folds=lasso.folds, seed=seed, path_ratio=lasso.path_ratio, feature_names=names)
            if not fit.converged:
                logger.warning(f"Lasso did not converge within {lasso.max_iter} iterations")
            path_frame = pd.DataFrame({"alpha": fit.alphas, "cv_mse": fit.cv_mse})
            return [save_linear_model(fit.model, self.out / "lasso.yaml", kind="lasso",
                                      alpha=fit.alpha, converged=fit.converged),
                    atomic_write_text(self.out / "lasso_path.tsv", _tsv(path_frame))]
        if method == "nn":
            nn = self.config.nn
            model, losses = fit_nn(X, y, epochs=nn.epochs, lr=nn.lr, batch_size=nn.batch_size, seed=seed,
                                   dropout=nn.dropout, feature_names=names)
        elif method == "adv":
            adv = self.config.adv
            model, losses = fit_adv(X, y, _domain_labels(cohort), epochs=adv.epochs, lr=adv.lr,
                                    batch_size=adv.batch_size, lambda_w=adv.lambda_w,
                                    critic_steps=adv.critic_steps, seed=seed, gp_weight=adv.gp_weight,
                                    feature_names=names)
        else:
            raise UsageError(f"unknown baseline: {method}")
        losses_frame = pd.DataFrame({"epoch": np.arange(1, len(losses) + 1), "loss": losses})
        return [save_network(model, self.out / f"{method}.model"),
                atomic_write_text(self.out / f"{method}_losses.tsv", _tsv(losses_frame))]

    def fit_ensemble(self) -> List[Path]:
        cohort = load_cohort(self.args.data)
        p_z = read_scores(self.args.scores_z, cohort.sample_ids)
        p_x = read_scores(self.args.scores_x, cohort.sample_ids)
        mode = ENSEMBLE_MODES[self.args.method]
        if mode == "grid":
            weights = fit_grid(p_z, p_x, cohort.y)
        else:
            ensemble = self.config.ensemble
            weights = fit_gradient(p_z, p_x, cohort.y, init=tuple(ensemble.init), epochs=ensemble.epochs,
                                   lr=ensemble.lr)
        self.config.ensemble.mode = mode
        logger.info(f"Ensemble ({mode}): alpha={weights.alpha:.4g}, beta={weights.beta:.4g}, "
                    f"val_auc={weights.val_auc:.4f}")
        return [save_weights(weights, self.out / "ensemble.yaml")]

    def predict(self) -> List[Path]:
        model = load_model(self.args.model)
        name = self.args.name
        if isinstance(model, EnsembleWeights):
            if self.args.scores_z is None or self.args.scores_x is None:
                raise UsageError("predict with ensemble weights needs --scores-z and --scores-x")
            table = score_table(self.args.scores_z)
            sample_ids = list(table.index)
            scores = combine(table.to_numpy(), read_scores(self.args.scores_x, sample_ids), model)
        else:
            if self.args.data is None:
                raise UsageError("predict needs --data")
            cohort = load_cohort(self.args.data)
            sample_ids = cohort.sample_ids
            if model.role == LATENT:
                encoder = self._encoder(self.args.encoder)
                _, z_d = disentangle.encode(encoder, impute_mean(cohort.genotypes).dosages)
                scores = predict(model, z_d)
            else:
                scores = predict(model, cohort.genotypes)
        return [write_scores(self.out / f"{name}.scores.tsv", sample_ids, scores)]

    def evaluate(self) -> List[Path]:
        cohort = load_cohort(self.args.data)
        scores = read_scores(self.args.scores, cohort.sample_ids)
        if cohort.proportions is not None:
            strata = stratify_cohort(cohort.proportions, self.config.eval.cutoff, cohort.proportion_names)
        elif cohort.ancestry is not None:
            strata = cohort.ancestry
        else:
            strata = np.full(cohort.n_samples, "ALL", dtype=object)
        name = self.args.name or _model_name(Path(self.args.scores))
        report = metrics_by_stratum(scores, cohort.y, strata, model=name)
        logger.info(f"{name}: global AUC {report.global_auc:.4f} on {report.n} samples")
        return [write_metrics_json(report, self.out / "metrics.json")]

    def het_sweep(self) -> List[Path]:
        cohort = load_cohort(self.args.data, require_proportions=True)
        scores = {}
        for path in self.args.scores:
            name = _model_name(Path(path))
            if name in scores:
                raise UsageError(f"two score files map to model name {name!r}")
            scores[name] = read_scores(path, cohort.sample_ids)
        evaluation = self.config.eval
        sweep = het_sweep(scores, cohort.y, heterogeneity_order(cohort.proportions),
                          window=evaluation.window, stride=evaluation.stride)
        logger.info(f"Heterogeneity sweep: {sweep.n_windows} windows of {sweep.window} for {len(scores)} model(s)")
        return [write_het_sweep(sweep, self.out / "het_sweep.tsv")]
