"""
Tab-separated cohort files.

dosage.tsv       sample_id, then one column per variant; decimals in [0, 2] or NA
labels.tsv       sample_id, phenotype, [ancestry], [age]
proportions.tsv  sample_id, then superpopulation columns (EUR AFR AMR EAS SAS)
scores.tsv       sample_id, score
"""
import io
import logging
from pathlib import Path
from typing import Dict, List, Optional, Union

import numpy as np
import pandas as pd

from errors import DataError, RangeError
from utils import atomic_write_text, ensure_directory
from .data import SUPERPOPULATIONS, GenotypeMatrix, LabeledCohort

logger = logging.getLogger(__name__)

MISSING = "NA"
DOSAGE_FORMAT = "%.6f"
EXACT_FORMAT = "%.17g"
FILE_KINDS = ("dosage", "labels", "proportions")


def cohort_paths(prefix: Union[str, Path]) -> Dict[str, Path]:
    """Map a prefix (``data/train`` -> ``data/train.dosage.tsv``) or a directory to file paths."""
    prefix = Path(prefix)
    if prefix.is_dir():
        return {kind: prefix / f"{kind}.tsv" for kind in FILE_KINDS}
    return {kind: Path(f"{prefix}.{kind}.tsv") for kind in FILE_KINDS}


def _read_table(path: Path) -> pd.DataFrame:
    """Read a TSV as strings, rejecting ragged rows with their line number."""
    try:
        frame = pd.read_csv(path, sep="\t", dtype=str, keep_default_na=False, na_filter=False,
                            encoding="utf-8")
    except FileNotFoundError as e:
        raise DataError(f"file not found: {path}") from e
    except pd.errors.ParserError as e:
        raise DataError(f"{path}: ragged row ({e})") from e
    except pd.errors.EmptyDataError as e:
        raise DataError(f"{path}: file is empty") from e
    ragged = frame.isna().any(axis=1).to_numpy()
    if ragged.any():
        line = int(np.flatnonzero(ragged)[0]) + 2
        raise DataError(f"{path}: line {line} has fewer fields than the header")
    if frame.columns[0] != "sample_id":
        raise DataError(f"{path}: first header column must be sample_id, got {frame.columns[0]!r}")
    return frame


def _parse_block(frame: pd.DataFrame, columns: List[str], path: Path) -> np.ndarray:
    """Parse string cells as floats; NA becomes NaN, any other non-number is reported with its line."""
    raw = frame[columns]
    missing = raw.eq(MISSING)
    try:
        return raw.mask(missing).to_numpy(dtype=np.float64)
    except ValueError:
        pass
    bad = (raw.apply(pd.to_numeric, errors="coerce").isna() & ~missing).to_numpy()
    if not bad.any():
        raise DataError(f"{path}: non-numeric values in columns {columns}")
    i, j = (int(v[0]) for v in np.nonzero(bad))
    raise DataError(f"{path}: line {i + 2}, column {columns[j]}: not a number: {raw.iat[i, j]!r}")


def load_dosage(path: Union[str, Path]) -> GenotypeMatrix:
    """Parse a dosage TSV; NA cells become missing (NaN), never 0."""
    path = Path(path)
    frame = _read_table(path)
    variants = list(frame.columns[1:])
    dosages = _parse_block(frame, variants, path)
    bad = (dosages < 0.0) | (dosages > 2.0)
    if bad.any():
        i, j = (int(v[0]) for v in np.nonzero(bad))
        raise RangeError(
            f"{path}: line {i + 2}, sample {frame.iloc[i, 0]}, variant {variants[j]}: "
            f"dosage {dosages[i, j]} outside [0, 2]")
    logger.info(f"Loaded {dosages.shape[0]} samples x {dosages.shape[1]} variants from {path}")
    return GenotypeMatrix(list(frame["sample_id"]), variants, dosages)


def load_labels(path: Union[str, Path]) -> pd.DataFrame:
    """Return a frame indexed by sample_id with phenotype, and ancestry/age when present."""
    path = Path(path)
    frame = _read_table(path)
    if "phenotype" not in frame.columns:
        raise DataError(f"{path}: missing phenotype column")
    unknown = set(frame.columns) - {"sample_id", "phenotype", "ancestry", "age"}
    if unknown:
        logger.debug(f"Ignoring extra label columns: {sorted(unknown)}")
    out = pd.DataFrame(index=pd.Index(frame["sample_id"], name="sample_id"))
    phenotype = _parse_block(frame, ["phenotype"], path)[:, 0]
    if np.isnan(phenotype).any():
        line = int(np.flatnonzero(np.isnan(phenotype))[0]) + 2
        raise DataError(f"{path}: line {line}: phenotype is missing")
    out["phenotype"] = phenotype
    if "ancestry" in frame.columns:
        out["ancestry"] = frame["ancestry"].to_numpy(dtype=object)
    if "age" in frame.columns:
        out["age"] = _parse_block(frame, ["age"], path)[:, 0]
    if out.index.has_duplicates:
        raise DataError(f"{path}: duplicate sample ids")
    return out


def load_proportions(path: Union[str, Path]) -> pd.DataFrame:
    path = Path(path)
    frame = _read_table(path)
    names = list(frame.columns[1:])
    unknown = [n for n in names if n not in SUPERPOPULATIONS]
    if unknown or len(names) < 2:
        raise DataError(f"{path}: proportion columns must be at least two of {SUPERPOPULATIONS}, got {names}")
    values = _parse_block(frame, names, path)
    if np.isnan(values).any():
        raise DataError(f"{path}: ancestry proportions may not be missing")
    out = pd.DataFrame(values, columns=names, index=pd.Index(frame["sample_id"], name="sample_id"))
    if out.index.has_duplicates:
        raise DataError(f"{path}: duplicate sample ids")
    return out


def load_cohort(prefix: Union[str, Path], require_proportions: bool = False) -> LabeledCohort:
    """Load dosage, labels and (when present) proportions, aligned on the dosage sample order."""
    paths = cohort_paths(prefix)
    genotypes = load_dosage(paths["dosage"])
    labels = load_labels(paths["labels"])
    missing = [s for s in genotypes.sample_ids if s not in labels.index]
    if missing:
        raise DataError(f"{paths['labels']}: no labels for {len(missing)} sample(s), e.g. {missing[:5]}")
    labels = labels.loc[genotypes.sample_ids]

    proportions = None
    names: tuple = ()
    if paths["proportions"].exists():
        table = load_proportions(paths["proportions"])
        absent = [s for s in genotypes.sample_ids if s not in table.index]
        if absent:
            raise DataError(f"{paths['proportions']}: no proportions for {len(absent)} sample(s), e.g. {absent[:5]}")
        table = table.loc[genotypes.sample_ids]
        proportions = table.to_numpy()
        names = tuple(table.columns)
    elif require_proportions:
        raise DataError(f"ancestry proportions file not found: {paths['proportions']}")

    return LabeledCohort(
        genotypes=genotypes,
        y=labels["phenotype"].to_numpy(),
        ancestry=labels["ancestry"].to_numpy(dtype=object) if "ancestry" in labels else None,
        proportions=proportions,
        proportion_names=names,
        age=labels["age"].to_numpy() if "age" in labels else None,
    )


def _to_tsv(frame: pd.DataFrame, float_format: Optional[str]) -> str:
    buffer = io.StringIO()
    frame.to_csv(buffer, sep="\t", index=False, float_format=float_format, na_rep=MISSING,
                 lineterminator="\n")
    return buffer.getvalue()


def export_cohort(cohort: LabeledCohort, directory: Union[str, Path], name: Optional[str] = None) -> Dict[str, Path]:
    """
    Write the cohort's dosage, labels and proportions files.

    Files are ``<directory>/<kind>.tsv``, or ``<directory>/<name>.<kind>.tsv``
    when ``name`` is given, so the result loads back with ``load_cohort``.
    """
    directory = ensure_directory(directory)
    paths = cohort_paths(directory if name is None else directory / name)

    dosage = pd.DataFrame(cohort.x, columns=cohort.genotypes.variant_ids)
    dosage.insert(0, "sample_id", cohort.sample_ids)
    atomic_write_text(paths["dosage"], _to_tsv(dosage, DOSAGE_FORMAT))

    labels = pd.DataFrame({"sample_id": cohort.sample_ids, "phenotype": cohort.y})
    if cohort.ancestry is not None:
        labels["ancestry"] = cohort.ancestry
    if cohort.age is not None:
        labels["age"] = cohort.age
    atomic_write_text(paths["labels"], _to_tsv(labels, "%.10g"))

    written = {"dosage": paths["dosage"], "labels": paths["labels"]}
    if cohort.proportions is not None:
        proportions = pd.DataFrame(cohort.proportions, columns=list(cohort.proportion_names))
        proportions.insert(0, "sample_id", cohort.sample_ids)
        atomic_write_text(paths["proportions"], _to_tsv(proportions, EXACT_FORMAT))
        written["proportions"] = paths["proportions"]
    logger.info(f"Exported {cohort.n_samples} samples to {paths['dosage'].parent}")
    return written


def write_scores(path: Union[str, Path], sample_ids, scores) -> Path:
    frame = pd.DataFrame({"sample_id": list(sample_ids), "score": np.asarray(scores, dtype=np.float64)})
    return atomic_write_text(path, _to_tsv(frame, EXACT_FORMAT))


def score_table(path: Union[str, Path]) -> pd.Series:
    """Scores indexed by sample id, in file order."""
    path = Path(path)
    frame = _read_table(path)
    if "score" not in frame.columns:
        raise DataError(f"{path}: missing score column")
    values = pd.Series(_parse_block(frame, ["score"], path)[:, 0], index=frame["sample_id"])
    if values.index.has_duplicates:
        raise DataError(f"{path}: duplicate sample ids")
    return values


def read_scores(path: Union[str, Path], sample_ids: Optional[List[str]] = None) -> np.ndarray:
    """Read a scores TSV, reordered to ``sample_ids`` when given."""
    values = score_table(path)
    if sample_ids is None:
        return values.to_numpy()
    missing = [s for s in sample_ids if s not in values.index]
    if missing:
        raise DataError(f"{path}: no score for {len(missing)} sample(s), e.g. {missing[:5]}")
    return values.loc[list(sample_ids)].to_numpy()
