"""Optimizer, schedule, and training-loop contracts."""

import numpy as np
import pytest

from coopsig.nn import (
    BatchNorm1d,
    Conv1d,
    Dense,
    GlobalAvgPool,
    Hyperparameters,
    MaxPool2,
    Network,
    ReLU,
    Softmax,
    fit,
    lr_at_epoch,
    predict,
    sgd_momentum_step,
)


class TestSgdMomentum:
    def test_zero_momentum_is_vanilla_sgd(self):
        p = np.array([1.0]); v = np.zeros(1); g = np.array([2.0])
        sgd_momentum_step(p, g, v, lr=0.1, momentum=0.0)
        np.testing.assert_allclose(p, [0.8])

    def test_two_step_hand_computation(self):
        # v0=0, g=1 each step, mu=0.9, lr=0.1: dp1=-0.1, dp2=-0.19
        p = np.array([0.0]); v = np.zeros(1); g = np.array([1.0])
        sgd_momentum_step(p, g, v, lr=0.1, momentum=0.9)
        np.testing.assert_allclose(p, [-0.1])
        sgd_momentum_step(p, g, v, lr=0.1, momentum=0.9)
        np.testing.assert_allclose(p, [-0.29])  # second delta -0.19

    def test_zero_gradient_zero_velocity_is_a_fixed_point(self):
        p = np.array([3.0]); v = np.zeros(1); g = np.zeros(1)
        sgd_momentum_step(p, g, v, lr=0.5, momentum=0.9)
        np.testing.assert_allclose(p, [3.0])


class TestSchedule:
    def test_first_ten_epochs_hold_initial_rate(self):
        hyper = Hyperparameters()
        for e in range(10):
            assert lr_at_epoch(e, hyper) == 0.01

    def test_halving_boundaries(self):
        hyper = Hyperparameters()
        assert lr_at_epoch(10, hyper) == 0.005
        assert lr_at_epoch(39, hyper) == pytest.approx(0.00125)

    def test_epoch_out_of_range(self):
        with pytest.raises(ValueError):
            lr_at_epoch(40, Hyperparameters())


def _small_net(seed=0):
    layers = [
        Conv1d(2, 16, 5),
        BatchNorm1d(16),
        ReLU(),
        MaxPool2(),
        Conv1d(16, 32, 3, stride=2),
        BatchNorm1d(32),
        ReLU(),
        GlobalAvgPool(),
        Dense(32, 64),
        ReLU(),
        Dense(64, 12),
        Softmax(),
    ]
    net = Network(layers)
    net.init_params(np.random.default_rng(seed))
    return net


def _toy_data(n=64, seed=0):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n, 2, 32)).astype(np.float32)
    y = rng.integers(0, 12, n)
    return x, y


def test_overfit_probe_memorizes_a_tiny_set():
    # 64 fixed random samples: training accuracy >= 0.95 within 200 epochs
    x, y = _toy_data()
    net = _small_net()
    hyper = Hyperparameters(epochs=200, batch_size=16, halving_period=80, seed=1)
    history = fit(net, x, y, hyper)
    assert max(history.accuracy) >= 0.95


def test_history_lengths_and_recorded_lr_match_schedule():
    x, y = _toy_data(n=32)
    hyper = Hyperparameters(epochs=25, batch_size=16, seed=2)
    history = fit(_small_net(), x, y, hyper)
    assert len(history.loss) == len(history.accuracy) == len(history.lr) == 25
    for e, lr in enumerate(history.lr):
        assert lr == lr_at_epoch(e, hyper)


def test_same_seed_reruns_bitwise_identical_history():
    x, y = _toy_data(n=48)
    hyper = Hyperparameters(epochs=5, batch_size=16, seed=3)
    h1 = fit(_small_net(seed=7), x, y, hyper)
    h2 = fit(_small_net(seed=7), x, y, hyper)
    assert h1.loss == h2.loss
    assert h1.accuracy == h2.accuracy


def test_different_seed_changes_history():
    x, y = _toy_data(n=48)
    h1 = fit(_small_net(seed=7), x, y, Hyperparameters(epochs=3, batch_size=16, seed=3))
    h2 = fit(_small_net(seed=8), x, y, Hyperparameters(epochs=3, batch_size=16, seed=3))
    assert h1.loss != h2.loss


class TestPredict:
    def test_rows_sum_to_one(self):
        net = _small_net()
        x, _ = _toy_data(n=20)
        probs = predict(net, x)
        np.testing.assert_allclose(probs.sum(axis=1), 1.0, atol=1e-6)
        assert ((probs.argmax(axis=1) >= 0) & (probs.argmax(axis=1) < 12)).all()

    def test_one_by_one_matches_batch(self):
        net = _small_net(seed=4)
        x, _ = _toy_data(n=10, seed=4)
        batch = predict(net, x)
        single = np.concatenate([predict(net, x[k : k + 1]) for k in range(len(x))])
        np.testing.assert_allclose(single, batch, atol=1e-5)
        np.testing.assert_array_equal(single.argmax(axis=1), batch.argmax(axis=1))

    def test_repeated_calls_agree_bitwise(self):
        net = _small_net(seed=5)
        x, _ = _toy_data(n=16, seed=5)
        np.testing.assert_array_equal(predict(net, x), predict(net, x))


def test_fit_rejects_empty_and_mismatched_data():
    net = _small_net()
    with pytest.raises(ValueError):
        fit(net, np.zeros((0, 2, 32), dtype=np.float32), np.zeros(0, dtype=int),
            Hyperparameters(epochs=1))
    with pytest.raises(ValueError):
        fit(net, np.zeros((4, 2, 32), dtype=np.float32), np.zeros(3, dtype=int),
            Hyperparameters(epochs=1))
