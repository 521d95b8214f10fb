import numpy as np
import pytest

from cohort import (
    MIXED,
    GenotypeMatrix,
    LabeledCohort,
    age_filter,
    ancestry_stratify,
    ancestry_variance,
    dichotomize_proxy,
    export_cohort,
    heterogeneity_order,
    hwe_pvalues,
    impute_mean,
    load_cohort,
    load_dosage,
    load_labels,
    load_proportions,
    qc_filter,
    read_scores,
    stratified_split,
    stratify_cohort,
    write_scores,
)
from config import QcThresholds
from errors import ConfigError, DataError, DimensionError, ParameterError, RangeError, SplitError


def write_tsv(path, rows):
    path.write_text("".join("\t".join(str(c) for c in row) + "\n" for row in rows))
    return path


def make_cohort(y, age=None, ancestry=None) -> LabeledCohort:
    y = np.asarray(y, dtype=float)
    ids = [f"s{i}" for i in range(y.size)]
    genotypes = GenotypeMatrix(ids, ["v1"], np.ones((y.size, 1)))
    return LabeledCohort(genotypes=genotypes, y=y, ancestry=ancestry, age=age)


class TestFiles:
    def test_dosage_with_missing_values(self, tmp_path):
        path = write_tsv(tmp_path / "d.tsv", [["sample_id", "rs1", "rs2"], ["a", 0, "NA"], ["b", 1.5, 2]])
        genotypes = load_dosage(path)
        assert genotypes.variant_ids == ["rs1", "rs2"]
        assert np.isnan(genotypes.dosages[0, 1])
        assert genotypes.dosages[1, 0] == 1.5

    def test_out_of_range_dosage_names_line(self, tmp_path):
        path = write_tsv(tmp_path / "d.tsv", [["sample_id", "rs1"], ["a", 0], ["b", 2.5]])
        with pytest.raises(RangeError, match="line 3"):
            load_dosage(path)

    def test_non_numeric_dosage(self, tmp_path):
        path = write_tsv(tmp_path / "d.tsv", [["sample_id", "rs1"], ["a", "x"]])
        with pytest.raises(DataError, match="line 2"):
            load_dosage(path)

    def test_first_non_numeric_cell_is_reported(self, tmp_path):
        path = write_tsv(tmp_path / "d.tsv", [["sample_id", "rs1", "rs2"], ["a", 0, 1], ["b", "NA", "2,0"],
                                              ["c", "?", 1]])
        with pytest.raises(DataError, match=r"line 3, column rs2: not a number: '2,0'"):
            load_dosage(path)

    def test_decimals_parse_exactly(self, tmp_path):
        path = write_tsv(tmp_path / "p.tsv", [["sample_id", "EUR", "AFR"], ["a", "0.10000000000000001", "0.9"],
                                              ["b", "0.33333333333333331", "0.66666666666666674"]])
        values = load_proportions(path).to_numpy()
        np.testing.assert_array_equal(values, [[0.1, 0.9], [1 / 3, float("0.66666666666666674")]])

    def test_ragged_row(self, tmp_path):
        path = write_tsv(tmp_path / "d.tsv", [["sample_id", "rs1"], ["a", 0], ["b", 1, 2]])
        with pytest.raises(DataError):
            load_dosage(path)

    def test_header_must_start_with_sample_id(self, tmp_path):
        path = write_tsv(tmp_path / "d.tsv", [["id", "rs1"], ["a", 0]])
        with pytest.raises(DataError):
            load_dosage(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataError):
            load_dosage(tmp_path / "absent.tsv")

    def test_labels_need_phenotype(self, tmp_path):
        path = write_tsv(tmp_path / "l.tsv", [["sample_id", "ancestry"], ["a", "EUR"]])
        with pytest.raises(DataError):
            load_labels(path)

    def test_missing_phenotype_names_line(self, tmp_path):
        path = write_tsv(tmp_path / "l.tsv", [["sample_id", "phenotype"], ["a", 1], ["b", "NA"]])
        with pytest.raises(DataError, match="line 3"):
            load_labels(path)

    def test_cohort_aligns_labels_to_dosage_order(self, tmp_path):
        write_tsv(tmp_path / "c.dosage.tsv", [["sample_id", "rs1"], ["a", 0], ["b", 2]])
        write_tsv(tmp_path / "c.labels.tsv", [["sample_id", "phenotype", "age"], ["b", 1, 70], ["a", 0, 66]])
        cohort = load_cohort(tmp_path / "c")
        np.testing.assert_array_equal(cohort.y, [0.0, 1.0])
        np.testing.assert_array_equal(cohort.age, [66.0, 70.0])
        assert cohort.proportions is None and cohort.ancestry is None

    def test_cohort_with_unlabeled_sample(self, tmp_path):
        write_tsv(tmp_path / "c.dosage.tsv", [["sample_id", "rs1"], ["a", 0], ["b", 2]])
        write_tsv(tmp_path / "c.labels.tsv", [["sample_id", "phenotype"], ["a", 0]])
        with pytest.raises(DataError):
            load_cohort(tmp_path / "c")

    def test_proportions_must_sum_to_one(self, tmp_path):
        write_tsv(tmp_path / "c.dosage.tsv", [["sample_id", "rs1"], ["a", 0]])
        write_tsv(tmp_path / "c.labels.tsv", [["sample_id", "phenotype"], ["a", 0]])
        write_tsv(tmp_path / "c.proportions.tsv", [["sample_id", "EUR", "AFR"], ["a", 0.5, 0.4]])
        with pytest.raises(DataError):
            load_cohort(tmp_path / "c")

    def test_required_proportions(self, tmp_path):
        write_tsv(tmp_path / "c.dosage.tsv", [["sample_id", "rs1"], ["a", 0]])
        write_tsv(tmp_path / "c.labels.tsv", [["sample_id", "phenotype"], ["a", 0]])
        with pytest.raises(DataError):
            load_cohort(tmp_path / "c", require_proportions=True)

    def test_export_then_load(self, small_cohort, tmp_path):
        subset = small_cohort.subset(np.arange(25))
        export_cohort(subset, tmp_path, name="part")
        loaded = load_cohort(tmp_path / "part", require_proportions=True)
        assert loaded.sample_ids == subset.sample_ids
        np.testing.assert_array_equal(loaded.x, subset.x)
        np.testing.assert_array_equal(loaded.y, subset.y)
        np.testing.assert_array_equal(loaded.proportions, subset.proportions)
        assert loaded.proportion_names == subset.proportion_names
        assert list(loaded.ancestry) == list(subset.ancestry)

    def test_scores_follow_requested_order(self, tmp_path):
        path = write_scores(tmp_path / "m.scores.tsv", ["a", "b", "c"], [0.1, -2.0, 1e-300])
        np.testing.assert_array_equal(read_scores(path, ["c", "a"]), [1e-300, 0.1])
        with pytest.raises(DataError):
            read_scores(path, ["d"])


class TestQc:
    def test_reasons_in_filter_order(self):
        n = 100
        dosages = np.zeros((n, 4))
        dosages[: n // 2, 0] = np.nan
        dosages[:, 2] = 1.0
        dosages[:, 3] = np.repeat([0.0, 1.0, 2.0], [25, 50, 25])
        genotypes = GenotypeMatrix([f"s{i}" for i in range(n)], ["miss", "mono", "het", "ok"], dosages)
        kept, report = qc_filter(genotypes, np.ones(n, dtype=bool), QcThresholds())
        assert kept.variant_ids == ["ok"]
        assert [(r.variant_id, r.reason) for r in report.dropped] == [
            ("miss", "missing-rate"), ("mono", "maf"), ("het", "hwe")]
        assert report.dropped[0].statistic == 0.5
        assert report.counts() == {"missing-rate": 1, "maf": 1, "hwe": 1}
        assert report.n_kept == 1

    def test_hwe_can_be_disabled(self):
        genotypes = GenotypeMatrix(["a", "b", "c", "d"], ["het"], np.ones((4, 1)))
        kept, report = qc_filter(genotypes, np.zeros(4, dtype=bool), QcThresholds(hwe_p_floor=0.0))
        assert kept.variant_ids == ["het"]
        assert not report.dropped

    def test_hwe_needs_controls(self):
        genotypes = GenotypeMatrix(["a", "b"], ["v"], np.ones((2, 1)))
        with pytest.raises(ConfigError):
            qc_filter(genotypes, [False, False], QcThresholds())

    def test_hwe_only_uses_controls(self):
        dosages = np.concatenate([np.repeat([0.0, 1.0, 2.0], [25, 50, 25]), np.ones(200)])[:, None]
        genotypes = GenotypeMatrix([f"s{i}" for i in range(300)], ["v"], dosages)
        controls = np.arange(300) < 100
        kept, _ = qc_filter(genotypes, controls, QcThresholds())
        assert kept.variant_ids == ["v"]

    def test_report_file(self, tmp_path):
        genotypes = GenotypeMatrix(["a", "b"], ["mono"], np.zeros((2, 1)))
        _, report = qc_filter(genotypes, [True, True], QcThresholds(hwe_p_floor=0.0))
        lines = report.write(tmp_path / "qc.tsv").read_text().splitlines()
        assert lines == ["variant_id\treason\tstatistic", "mono\tmaf\t0"]

    def test_hwe_equilibrium_counts(self):
        dosages = np.repeat([0.0, 1.0, 2.0], [25, 50, 25])[:, None]
        assert hwe_pvalues(dosages)[0] == pytest.approx(1.0)

    def test_hwe_monomorphic_and_empty_columns(self):
        dosages = np.column_stack([np.zeros(10), np.full(10, np.nan)])
        np.testing.assert_array_equal(hwe_pvalues(dosages), [1.0, 1.0])

    def test_impute_mean(self):
        genotypes = GenotypeMatrix(["a", "b", "c"], ["v1", "v2"], np.array([[0.0, 1.0], [np.nan, 1.0], [2.0, np.nan]]))
        np.testing.assert_array_equal(impute_mean(genotypes).dosages, [[0.0, 1.0], [1.0, 1.0], [2.0, 1.0]])

    def test_impute_all_missing_column(self):
        genotypes = GenotypeMatrix(["a"], ["v1"], np.array([[np.nan]]))
        with pytest.raises(DataError):
            impute_mean(genotypes)


class TestPreparation:
    def test_dichotomize_at_threshold(self):
        np.testing.assert_array_equal(dichotomize_proxy([1.9, 2.0, 3.5, 0.0]), [0.0, 1.0, 1.0, 0.0])
        np.testing.assert_array_equal(dichotomize_proxy([0.5, 1.0], threshold=1.0), [0.0, 1.0])

    def test_dichotomize_rejects_missing(self):
        with pytest.raises(DataError):
            dichotomize_proxy([1.0, np.nan])

    def test_age_filter_keeps_cases(self):
        cohort = make_cohort([1, 0, 0, 1], age=[40.0, 70.0, 60.0, np.nan])
        kept = age_filter(cohort, min_age=65)
        assert kept.sample_ids == ["s0", "s1", "s3"]

    def test_age_filter_needs_control_ages(self):
        with pytest.raises(DataError):
            age_filter(make_cohort([1, 0]), min_age=65)
        with pytest.raises(DataError):
            age_filter(make_cohort([0, 0], age=[70.0, np.nan]), min_age=65)


class TestSplit:
    def test_class_proportions_and_order(self):
        cohort = make_cohort([1] * 10 + [0] * 20)
        parts = stratified_split(cohort, (0.6, 0.2, 0.2), seed=4)
        assert [int(p.y.sum()) for p in parts] == [6, 2, 2]
        assert [int((p.y == 0).sum()) for p in parts] == [12, 4, 4]
        ids = [s for p in parts for s in p.sample_ids]
        assert sorted(ids) == sorted(cohort.sample_ids)
        for part in parts:
            positions = [cohort.sample_ids.index(s) for s in part.sample_ids]
            assert positions == sorted(positions)

    def test_seed_fixes_assignment(self):
        cohort = make_cohort([1] * 10 + [0] * 20)
        first = stratified_split(cohort, (0.6, 0.2, 0.2), seed=4)
        second = stratified_split(cohort, (0.6, 0.2, 0.2), seed=4)
        other = stratified_split(cohort, (0.6, 0.2, 0.2), seed=5)
        assert [p.sample_ids for p in first] == [p.sample_ids for p in second]
        assert [p.sample_ids for p in first] != [p.sample_ids for p in other]

    def test_tiny_class(self):
        with pytest.raises(SplitError):
            stratified_split(make_cohort([1, 1, 0, 0, 0]), (0.6, 0.2, 0.2), seed=0)

    def test_part_sizes(self):
        cohort = make_cohort([1] * 30 + [0] * 70)
        parts = stratified_split(cohort, (0.7, 0.15, 0.15), seed=0)
        assert [p.n_samples for p in parts] == [70, 15, 15]

    def test_parts_too_small_for_both_classes(self):
        with pytest.raises(SplitError):
            stratified_split(make_cohort([1] * 3 + [0] * 3), (0.9, 0.05, 0.05), seed=0)

    @pytest.mark.parametrize("fractions", [(0.5, 0.5, 0.1), (0.8, 0.2, 0.0), (0.5, 0.5)])
    def test_bad_fractions(self, fractions):
        with pytest.raises(ParameterError):
            stratified_split(make_cohort([1] * 5 + [0] * 5), fractions, seed=0)


class TestAncestry:
    def test_dominant_component(self):
        assert ancestry_stratify([0.95, 0.05, 0.0, 0.0, 0.0], 0.9) == "EUR"
        assert ancestry_stratify([0.0, 0.02, 0.0, 0.98, 0.0], 0.9) == "EAS"

    def test_cutoff_is_strict(self):
        assert ancestry_stratify([0.9, 0.1, 0.0, 0.0, 0.0], 0.9) == MIXED

    def test_ambiguous_cutoff(self):
        with pytest.raises(ParameterError):
            ancestry_stratify([0.5, 0.5, 0.0, 0.0, 0.0], 0.4)

    def test_wrong_width(self):
        with pytest.raises(DimensionError):
            ancestry_stratify([0.5, 0.5], 0.9)

    def test_stratify_rows_with_custom_names(self):
        proportions = np.array([[0.97, 0.02, 0.01], [0.3, 0.3, 0.4], [0.0, 0.0, 1.0]])
        labels = stratify_cohort(proportions, 0.9, names=("EUR", "AFR", "AMR"))
        assert list(labels) == ["EUR", MIXED, "AMR"]

    def test_heterogeneity_order(self):
        proportions = np.array([[0.5, 0.5, 0.0], [1.0, 0.0, 0.0], [0.5, 0.5, 0.0], [0.2, 0.3, 0.5]])
        np.testing.assert_array_equal(heterogeneity_order(proportions), [1, 0, 2, 3])
        assert ancestry_variance(proportions)[1] == pytest.approx(2.0 / 9.0)

    def test_order_runs_from_homogeneous_to_admixed(self, small_cohort):
        variance = ancestry_variance(small_cohort.proportions)
        ordered = variance[heterogeneity_order(small_cohort.proportions)]
        assert np.all(np.diff(ordered) <= 0.0)

    def test_single_component_has_no_heterogeneity(self):
        with pytest.raises(ParameterError):
            ancestry_variance(np.ones((3, 1)))
