import struct

import numpy as np
import pytest

from conftest import GRAD_FLOOR, GRAD_TOL
from errors import CheckpointError, DimensionError, LabelError, ParameterError, VersionError
from nncore import (
    MLP,
    AdamState,
    AffineLayer,
    LayerSpec,
    RngStream,
    adam_step,
    bce_with_logits,
    bce_with_logits_grad,
    grad_check,
    mse_grad,
    pack_arrays,
    unpack_arrays,
)


class TestRngStream:
    def test_same_seed_same_draws(self):
        np.testing.assert_array_equal(RngStream(5).normal(size=10), RngStream(5).normal(size=10))

    def test_spawned_children_are_reproducible_and_distinct(self):
        a1, b1 = RngStream(5).spawn(2)
        a2, b2 = RngStream(5).spawn(2)
        first = a1.random(8)
        np.testing.assert_array_equal(first, a2.random(8))
        assert not np.array_equal(first, b1.random(8))

    def test_negative_seed_rejected(self):
        with pytest.raises(ParameterError):
            RngStream(-1)


class TestAffineLayer:
    def test_forward_applies_relu(self):
        layer = AffineLayer(W=np.array([[1.0, -1.0], [0.5, 0.5]]), b=np.array([0.0, -2.0]))
        y, _ = layer.forward(np.array([[1.0, 3.0]]))
        np.testing.assert_array_equal(y, [[0.0, 0.0]])

    def test_identity_activation(self):
        layer = AffineLayer(W=np.array([[2.0]]), b=np.array([1.0]), activation="identity")
        y, _ = layer.forward(np.array([[-3.0]]))
        np.testing.assert_array_equal(y, [[-5.0]])

    def test_rejects_wrong_input_width(self, rng):
        layer = AffineLayer.initialize(3, 2, "relu", rng)
        with pytest.raises(DimensionError):
            layer.forward(np.ones((4, 5)))

    def test_dropout_is_identity_outside_training(self, rng):
        layer = AffineLayer.initialize(4, 6, "relu", rng)
        x = rng.normal(size=(5, 4))
        plain, _ = layer.forward(x)
        evaluated, _ = layer.forward(x, train=False, dropout_p=0.5, rng=rng)
        np.testing.assert_array_equal(plain, evaluated)

    def test_dropout_scales_survivors(self, rng):
        layer = AffineLayer(W=np.ones((50, 1)), b=np.zeros(50), activation="identity")
        y, cache = layer.forward(np.ones((1, 1)), train=True, dropout_p=0.5, rng=rng)
        assert set(np.unique(y)) <= {0.0, 2.0}
        np.testing.assert_array_equal(cache.dropout_mask * 0.5, (y > 0) * 1.0)

    def test_dropout_needs_rng(self, rng):
        layer = AffineLayer.initialize(2, 2, "relu", rng)
        with pytest.raises(ParameterError):
            layer.forward(np.ones((1, 2)), train=True, dropout_p=0.5)


class TestGradients:
    def test_mlp_with_mse_matches_finite_differences(self, rng):
        network = MLP.build([LayerSpec("fc1", 5, 7), LayerSpec("fc2", 7, 3, activation="identity")], rng)
        x = rng.normal(size=(6, 5))
        target = rng.normal(size=(6, 3))

        def loss_fn():
            out, caches = network.forward(x)
            loss, grad = mse_grad(target, out)
            grads, _ = network.backward(caches, grad)
            return loss, grads

        worst = grad_check(loss_fn, network.parameters(), n_samples=None, floor=GRAD_FLOOR)
        assert worst < GRAD_TOL

    def test_logistic_loss_gradient(self, rng):
        logits = rng.normal(0.0, 2.0, size=12)
        y = (rng.random(12) > 0.5).astype(float)
        params = {"logit": logits}

        def loss_fn():
            loss, grad = bce_with_logits_grad(params["logit"], y)
            return loss, {"logit": grad}

        assert grad_check(loss_fn, params, n_samples=None, floor=GRAD_FLOOR) < GRAD_TOL

    def test_logistic_loss_is_stable_for_large_logits(self):
        assert bce_with_logits([1000.0], [0.0]) == pytest.approx(1000.0)
        assert bce_with_logits([1000.0], [1.0]) == pytest.approx(0.0, abs=1e-300)
        assert np.isfinite(bce_with_logits([-1e6, 1e6], [1.0, 0.0]))

    def test_logistic_loss_rejects_non_binary_labels(self):
        with pytest.raises(LabelError):
            bce_with_logits([0.1, 0.2], [0.0, 0.5])


class TestAdam:
    def test_first_step_moves_by_learning_rate(self):
        params = {"w": np.array([1.0, -1.0, 0.0])}
        grads = {"w": np.array([3.0, -0.2, 0.0])}
        state = AdamState.for_params(params, lr=0.1)
        adam_step(params, grads, state)
        np.testing.assert_allclose(params["w"], [0.9, -0.9, 0.0], atol=1e-7)
        assert state.t == 1

    def test_minimises_a_quadratic(self):
        params = {"w": np.array([5.0, -3.0])}
        state = AdamState.for_params(params, lr=0.05)
        for _ in range(2000):
            adam_step(params, {"w": 2.0 * params["w"]}, state)
        np.testing.assert_allclose(params["w"], 0.0, atol=5e-2)

    def test_shape_mismatch_rejected(self):
        params = {"w": np.zeros(3)}
        with pytest.raises(DimensionError):
            adam_step(params, {"w": np.zeros(2)}, AdamState.for_params(params, lr=0.1))


class TestArrayContainer:
    MAGIC = b"TESTMAGC"

    def test_round_trip_is_bitwise(self, rng):
        arrays = {"a.W": rng.normal(size=(3, 4)), "a.b": rng.normal(size=3), "empty": np.zeros((0, 0))}
        dims, loaded = unpack_arrays(pack_arrays(self.MAGIC, 1, (3, 2, 1), arrays), self.MAGIC, 1)
        assert dims == (3, 2, 1)
        assert list(loaded) == ["a.W", "a.b", "empty"]
        np.testing.assert_array_equal(loaded["a.W"], arrays["a.W"])
        np.testing.assert_array_equal(loaded["a.b"], arrays["a.b"].reshape(1, -1))
        assert loaded["empty"].shape == (0, 0)

    def test_bad_magic(self):
        data = pack_arrays(self.MAGIC, 1, (0, 0, 0), {})
        with pytest.raises(CheckpointError):
            unpack_arrays(data, b"OTHERMAG", 1)

    def test_version_mismatch(self):
        data = bytearray(pack_arrays(self.MAGIC, 1, (0, 0, 0), {}))
        struct.pack_into("<I", data, 8, 2)
        with pytest.raises(VersionError):
            unpack_arrays(bytes(data), self.MAGIC, 1)

    @pytest.mark.parametrize("cut", [4, 30, 60])
    def test_truncation(self, cut, rng):
        data = pack_arrays(self.MAGIC, 1, (0, 0, 0), {"w": rng.normal(size=(2, 5))})
        with pytest.raises(CheckpointError):
            unpack_arrays(data[:cut], self.MAGIC, 1)

    def test_trailing_bytes(self):
        data = pack_arrays(self.MAGIC, 1, (0, 0, 0), {"w": np.ones((1, 1))})
        with pytest.raises(CheckpointError):
            unpack_arrays(data + b"\x00", self.MAGIC, 1)
