import numpy as np
import pytest

from conftest import GRAD_FLOOR, GRAD_TOL
from disentangle import MultiViewBatch, ScParams, duplicate_batch, sc_loss
from errors import DataError, DimensionError, ParameterError
from nncore import grad_check


class TestScLoss:
    @pytest.mark.parametrize("tau", [0.03, 0.05])
    def test_identical_embeddings_closed_form(self, tau):
        batch = duplicate_batch(np.array([[1.0, 0.0], [1.0, 0.0]]), [1, 1])
        value, grad = sc_loss(batch, ScParams(tau))
        assert value == pytest.approx(4.0 * np.log(3.0), abs=1e-9)
        np.testing.assert_allclose(grad, 0.0, atol=1e-9)

    def test_gradient_matches_finite_differences(self, rng):
        Z = rng.normal(size=(8, 3))
        batch = MultiViewBatch(Z=Z, labels=np.array([0, 1, 0, 1, 0, 1, 0, 1]))
        params = {"Z": Z}

        def loss_fn():
            value, grad = sc_loss(batch, ScParams(0.1))
            return value, {"Z": grad}

        assert grad_check(loss_fn, params, n_samples=None, floor=GRAD_FLOOR) < GRAD_TOL

    def test_duplicated_batch_gradient(self, rng):
        Z = rng.normal(size=(5, 4))
        labels = np.array([2, 0, 2, 1, 0])
        params = {"Z": Z}

        def loss_fn():
            value, grad = sc_loss(duplicate_batch(params["Z"], labels), ScParams(0.2))
            return value, {"Z": grad[:5] + grad[5:]}

        assert grad_check(loss_fn, params, n_samples=None, floor=GRAD_FLOOR) < GRAD_TOL

    def test_invariant_to_row_scaling(self, rng):
        Z = rng.normal(size=(4, 3))
        labels = [0, 0, 1, 1]
        scaled = Z * np.array([[2.0], [0.5], [7.0], [1.5]])
        a, _ = sc_loss(duplicate_batch(Z, labels), ScParams(0.05))
        b, _ = sc_loss(duplicate_batch(scaled, labels), ScParams(0.05))
        assert a == pytest.approx(b, rel=1e-12)

    def test_row_permutation_permutes_gradient(self, rng):
        Z = rng.normal(size=(8, 3))
        labels = np.array([0, 1, 2, 0, 1, 2, 0, 1])
        perm = np.array([5, 2, 7, 0, 3, 1, 6, 4])
        value, grad = sc_loss(MultiViewBatch(Z=Z, labels=labels), ScParams(0.1))
        permuted_value, permuted_grad = sc_loss(MultiViewBatch(Z=Z[perm], labels=labels[perm]), ScParams(0.1))
        assert permuted_value == pytest.approx(value, rel=1e-12)
        np.testing.assert_allclose(permuted_grad, grad[perm], rtol=1e-10, atol=1e-12)

    def test_temperature_dependence(self):
        # two orthogonal classes: each anchor sees its duplicate at 1/tau and two rows at 0
        batch = duplicate_batch(np.eye(2), [0, 1])
        taus = [0.1, 0.5, 1.0, 2.0]
        values = [sc_loss(batch, ScParams(tau))[0] for tau in taus]
        expected = [4.0 * np.log1p(2.0 * np.exp(-1.0 / tau)) for tau in taus]
        np.testing.assert_allclose(values, expected, rtol=1e-10)
        assert np.all(np.diff(values) > 0)

    def test_gradient_has_no_radial_component(self, rng):
        Z = rng.normal(size=(6, 4)) * np.array([[0.5], [1.0], [3.0], [2.0], [0.2], [8.0]])
        _, grad = sc_loss(duplicate_batch(Z, [0, 1, 0, 2, 1, 2]), ScParams(0.07))
        rows = np.vstack([Z, Z])
        np.testing.assert_allclose((grad * rows).sum(axis=1), 0.0, atol=1e-9)

    def test_separated_classes_score_lower(self):
        together = np.array([[1.0, 0.0], [1.0, 0.1], [0.0, 1.0], [0.1, 1.0]])
        mixed = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 0.1], [0.1, 1.0]])
        labels = [0, 0, 1, 1]
        good, _ = sc_loss(duplicate_batch(together, labels), ScParams(0.1))
        bad, _ = sc_loss(duplicate_batch(mixed, labels), ScParams(0.1))
        assert good < bad

    def test_duplicates_are_positives(self):
        batch = duplicate_batch(np.eye(3), [0, 1, 2])
        assert batch.view_of(0) == 3
        np.testing.assert_array_equal(batch.positives(1), [4])
        value, _ = sc_loss(batch, ScParams(0.5))
        assert np.isfinite(value)

    def test_batch_without_positives_is_degenerate(self):
        batch = MultiViewBatch(Z=np.eye(3), labels=np.array([0, 1, 2]))
        with pytest.raises(DataError):
            sc_loss(batch, ScParams(0.1))

    def test_temperature_must_be_positive(self):
        with pytest.raises(ParameterError):
            ScParams(0.0)

    def test_label_count_must_match(self):
        with pytest.raises(DimensionError):
            duplicate_batch(np.ones((3, 2)), [0, 1])

    def test_single_row_batch_rejected(self):
        with pytest.raises(DataError):
            duplicate_batch(np.ones((1, 2)), [0])
