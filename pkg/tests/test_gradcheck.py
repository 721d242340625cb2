"""Analytic gradients vs central finite differences (wide-precision mode)."""

import numpy as np
import pytest

from coopsig.nn import (
    BatchNorm1d,
    Conv1d,
    Dense,
    Dropout,
    GlobalAvgPool,
    MaxPool2,
    Network,
    ReLU,
    Residual,
    Softmax,
    check_layer_gradients,
    check_network_gradients,
)
from coopsig.nn.gradcheck import build_check_network
from coopsig.rng import DOMAIN_DROPOUT, stream

TOL = 1e-3


def _rng():
    return np.random.default_rng(123)


@pytest.mark.parametrize(
    "make_layer,shape",
    [
        (lambda: Conv1d(2, 4, 3, dtype=np.float64), (3, 2, 16)),
        (lambda: Conv1d(2, 4, 7, dtype=np.float64), (3, 2, 16)),
        (lambda: Conv1d(3, 5, 3, stride=2, dtype=np.float64), (2, 3, 17)),
        (lambda: Conv1d(1, 1, 2, dtype=np.float64), (2, 1, 8)),
        (lambda: BatchNorm1d(3, dtype=np.float64), (4, 3, 12)),
        (lambda: BatchNorm1d(3, zero_scale=True, dtype=np.float64), (4, 3, 12)),
        (lambda: ReLU(), (4, 3, 12)),
        (lambda: MaxPool2(), (4, 3, 12)),
        (lambda: MaxPool2(), (4, 3, 13)),
        (lambda: GlobalAvgPool(), (4, 3, 12)),
        (lambda: Dense(10, 6, dtype=np.float64), (5, 10)),
        (lambda: Dropout(0.4), (5, 10)),
        (lambda: Softmax(), (5, 12)),
    ],
    ids=[
        "conv_k3", "conv_k7", "conv_stride2_odd", "conv_k2",
        "batchnorm", "batchnorm_zero_scale", "relu", "maxpool2",
        "maxpool2_odd", "global_avg", "dense", "dropout", "softmax",
    ],
)
def test_each_layer_kind_matches_finite_differences(make_layer, shape):
    layer = make_layer()
    layer.init_params(_rng())
    # offset inputs away from ReLU/maxpool kinks
    x = _rng().standard_normal(shape) + 0.05
    err = check_layer_gradients(layer, x, n_probes=40, probe_seed=7)
    assert err < TOL


def _residual_block():
    main = [
        Conv1d(3, 3, 3, dtype=np.float64),
        BatchNorm1d(3, dtype=np.float64),
        ReLU(),
        Conv1d(3, 3, 3, dtype=np.float64),
        BatchNorm1d(3, dtype=np.float64),
    ]
    return Residual(main)


def test_residual_block_matches_finite_differences():
    block = _residual_block()
    block.init_params(_rng())
    # non-zero second BN scale so its gradient path is exercised
    block.main[-1].params["gamma"].value[:] = 0.7
    x = _rng().standard_normal((3, 3, 10))
    err = check_layer_gradients(block, x, n_probes=60, probe_seed=11)
    assert err < TOL


def test_tiny_composed_network_matches_finite_differences():
    net, x, labels = build_check_network()
    err = check_network_gradients(net, x, labels, n_probes=100, probe_seed=3)
    assert err < TOL


def test_network_with_dropout_uses_fixed_masks():
    # seed 10 keeps every ReLU kink out of the probe's reach
    rng = np.random.default_rng(10)
    layers = [
        Conv1d(2, 3, 3, dtype=np.float64),
        ReLU(),
        GlobalAvgPool(),
        Dense(3, 12, dtype=np.float64),
        Dropout(0.5),
        Dense(12, 12, dtype=np.float64),
        Softmax(),
    ]
    net = Network(layers)
    net.init_params(rng)
    x = rng.standard_normal((5, 2, 16))
    labels = rng.integers(0, 12, 5)
    err = check_network_gradients(net, x, labels, n_probes=80, probe_seed=5, mask_seed=9)
    assert err < TOL


def test_relu_blocks_gradient_for_negative_inputs():
    relu = ReLU()
    x = -np.abs(np.random.default_rng(0).standard_normal((3, 4))) - 0.1
    relu.forward(x)
    dy = np.ones_like(x)
    np.testing.assert_array_equal(relu.backward(dy), 0.0)


def test_one_sgd_step_decreases_loss_on_a_fixed_batch():
    net, x, labels = build_check_network()
    rng = stream(0, DOMAIN_DROPOUT)
    loss0, _ = net.loss_and_grads(x, labels, rng=rng)
    for p in net.parameters():
        p.value -= 1e-3 * p.grad
    loss1 = net.evaluate_loss(x, labels, train=True, rng=stream(0, DOMAIN_DROPOUT))
    assert loss1 < loss0
