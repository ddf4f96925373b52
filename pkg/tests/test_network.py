import unittest

import numpy as np
from hypothesis import given, strategies as st
from pydantic import ValidationError

from donormatch.exceptions import ShapeMismatchError
from donormatch.network import (
    PARAM_NAMES,
    Network,
    NetworkConfig,
    backprop,
    forward,
    init_network,
    reference_network,
    sigmoid,
    squared_error,
)


def numeric_gradient(net: Network, x: np.ndarray, t: np.ndarray, name: str, h: float = 1e-5) -> np.ndarray:
    param = getattr(net, name)
    grad = np.zeros_like(param)
    for index in np.ndindex(param.shape):
        original = param[index]
        param[index] = original + h
        plus = squared_error(forward(net, x)[1], t)
        param[index] = original - h
        minus = squared_error(forward(net, x)[1], t)
        param[index] = original
        grad[index] = (plus - minus) / (2 * h)
    return grad


class Test_Sigmoid(unittest.TestCase):
    def test_known_values(self):
        self.assertEqual(sigmoid(0.0), 0.5)
        self.assertAlmostEqual(sigmoid(2.0), 1 / (1 + np.exp(-2.0)))

    def test_extremes_do_not_overflow(self):
        with np.errstate(over="raise"):
            self.assertEqual(sigmoid(1000.0), 1.0)
            self.assertEqual(sigmoid(-1000.0), 0.0)

    def test_vectorized(self):
        out = sigmoid(np.array([-1.0, 0.0, 1.0]))
        self.assertEqual(out.shape, (3,))
        self.assertAlmostEqual(float(out[0] + out[2]), 1.0)

    @given(st.floats(min_value=-700, max_value=700))
    def test_symmetry_and_range(self, x: float):
        s = sigmoid(x)
        self.assertGreaterEqual(s, 0.0)
        self.assertLessEqual(s, 1.0)
        self.assertAlmostEqual(s + sigmoid(-x), 1.0, places=12)


class Test_Forward(unittest.TestCase):
    def test_reference_forward_pass(self):
        hidden, outputs = forward(reference_network(), [0.827, 1.0])

        for got, want in zip(hidden, (0.9012, 0.8926, 0.8239), strict=True):
            self.assertAlmostEqual(float(got), want, delta=0.001)

        self.assertAlmostEqual(float(outputs[0]), 0.9677, delta=1e-4)
        self.assertAlmostEqual(float(outputs[1]), 0.0323, delta=1e-4)
        # within rounding of the originally published confidences
        self.assertAlmostEqual(float(outputs[0]), 0.9663, delta=0.01)
        self.assertAlmostEqual(float(outputs[1]), 0.0338, delta=0.01)

    def test_wrong_feature_count(self):
        with self.assertRaises(ShapeMismatchError):
            _ = forward(reference_network(), [0.5, 0.5, 0.5])


class Test_Network(unittest.TestCase):
    def test_shape_validation(self):
        with self.assertRaises(ShapeMismatchError):
            _ = Network(np.zeros((2, 3)), np.zeros(2), np.zeros((3, 2)), np.zeros(2))
        with self.assertRaises(ShapeMismatchError):
            _ = Network(np.zeros((2, 3)), np.zeros(3), np.zeros((4, 2)), np.zeros(2))
        with self.assertRaises(ShapeMismatchError):
            _ = Network(np.full((2, 3), np.nan), np.zeros(3), np.zeros((3, 2)), np.zeros(2))

    def test_layer_sizes_and_momentum_memory(self):
        net = reference_network()
        self.assertEqual(net.layer_sizes, (2, 3, 2))
        for name in PARAM_NAMES:
            self.assertEqual(net.prev_deltas[name].shape, getattr(net, name).shape)
            self.assertFalse(np.any(net.prev_deltas[name]))

    def test_copy_is_independent(self):
        net = reference_network()
        clone = net.copy()
        self.assertTrue(clone.same_weights(net))
        clone.w_in_hidden[0, 0] += 1.0
        self.assertFalse(clone.same_weights(net))

    def test_init_is_seeded_and_bounded(self):
        config = NetworkConfig(rng_seed=42)
        a = init_network(config)
        b = init_network(config)
        self.assertTrue(a.same_weights(b))
        self.assertFalse(a.same_weights(init_network(NetworkConfig(rng_seed=43))))

        self.assertTrue(np.all(np.abs(a.w_in_hidden) <= 0.5))
        self.assertTrue(np.all(np.abs(a.w_hidden_out) <= 0.5))
        self.assertFalse(np.any(a.b_hidden))
        self.assertFalse(np.any(a.b_out))

    def test_init_other_sizes(self):
        net = init_network(NetworkConfig(layer_sizes=(2, 5, 2)))
        self.assertEqual(net.layer_sizes, (2, 5, 2))

    def test_config_validation(self):
        defaults = NetworkConfig()
        self.assertEqual(defaults.layer_sizes, (2, 3, 2))
        self.assertEqual(defaults.learning_rate, 0.001)
        self.assertEqual(defaults.momentum, 0.9)
        self.assertEqual(defaults.max_epochs, 100)
        self.assertEqual(defaults.error_epsilon, 0.001)
        self.assertEqual(defaults.folds, 10)

        for update in ({"learning_rate": 0}, {"momentum": 1.0}, {"max_epochs": 0}, {"folds": 1}, {"layer_sizes": (2, 0, 2)}, {"rng_seed": -1}):
            with self.subTest(update=update):
                with self.assertRaises(ValidationError):
                    _ = NetworkConfig.model_validate(update)


class Test_Backprop(unittest.TestCase):
    def test_error_matches_forward(self):
        net = reference_network()
        x, t = np.array([0.3, 0.9]), np.array([1.0, 0.0])
        _, error = backprop(net, x, t)
        self.assertAlmostEqual(error, squared_error(forward(net, x)[1], t))

    def test_target_shape_checked(self):
        with self.assertRaises(ShapeMismatchError):
            _ = backprop(reference_network(), [0.1, 0.2], [1.0, 0.0, 0.0])

    def test_gradients_match_finite_differences(self):
        rng = np.random.default_rng(2024)
        worst = 0.0
        for _ in range(120):
            net = Network(
                rng.uniform(-2, 2, size=(2, 3)),
                rng.uniform(-1, 1, size=3),
                rng.uniform(-2, 2, size=(3, 2)),
                rng.uniform(-1, 1, size=2),
            )
            x = rng.uniform(0, 1, size=2)
            t = np.eye(2)[rng.integers(2)]

            grads, _ = backprop(net, x, t)
            for name in PARAM_NAMES:
                numeric = numeric_gradient(net, x, t, name)
                error = np.abs(grads[name] - numeric) / np.maximum(np.abs(grads[name]) + np.abs(numeric), 1e-4)
                worst = max(worst, float(np.max(error)))

        self.assertLess(worst, 1e-4)
