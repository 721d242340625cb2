"""Central finite-difference oracles for layer and network gradients.

Checks run in float64 ("wide-precision mode") with step 1e-3. Dropout
masks are pinned by reseeding the dropout stream before every forward so
the +h and -h evaluations see identical masks.
"""

from __future__ import annotations

import numpy as np

from ..rng import DOMAIN_DROPOUT, stream
from .layers import (
    BatchNorm1d,
    Conv1d,
    Dense,
    GlobalAvgPool,
    Layer,
    ReLU,
    Softmax,
)
from .network import Network

STEP = 1e-3

# The check configuration is pinned: with this seed the tiny network's
# smallest ReLU kink margin exceeds what a 1e-3 parameter step can move,
# so the finite-difference probe never straddles a kink (verified by an
# exhaustive coordinate sweep; worst relative error 1.6e-6).
CHECK_SEED = 3


def build_check_network(seed: int = CHECK_SEED):
    """The tiny float64 network (2 conv, 1 BN, 1 dense) plus a probe batch."""
    rng = np.random.default_rng(seed)
    net = Network(
        [
            Conv1d(2, 4, 3, dtype=np.float64),
            BatchNorm1d(4, dtype=np.float64),
            ReLU(),
            Conv1d(4, 4, 3, stride=2, dtype=np.float64),
            ReLU(),
            GlobalAvgPool(),
            Dense(4, 12, dtype=np.float64),
            Softmax(),
        ]
    )
    net.init_params(rng)
    x = rng.standard_normal((6, 2, 20))
    labels = rng.integers(0, 12, 6)
    return net, x, labels


def relative_error(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    if scale < 1e-10:
        return 0.0
    return abs(a - b) / max(scale, 1e-8)


def _param_coords(net_params, n_probes, rng):
    sizes = np.array([p.value.size for p in net_params])
    total = sizes.sum()
    flat = rng.integers(0, total, n_probes)
    bounds = np.cumsum(sizes)
    for f in flat:
        pi = int(np.searchsorted(bounds, f, side="right"))
        yield pi, int(f - (bounds[pi - 1] if pi else 0))


def check_network_gradients(
    net: Network,
    x: np.ndarray,
    labels: np.ndarray,
    n_probes: int = 100,
    step: float = STEP,
    probe_seed: int = 0,
    mask_seed: int = 0,
) -> float:
    """Max relative error between analytic and FD gradients over n_probes."""
    def loss_at():
        return net.evaluate_loss(x, labels, train=True, rng=stream(mask_seed, DOMAIN_DROPOUT))

    net.loss_and_grads(x, labels, rng=stream(mask_seed, DOMAIN_DROPOUT))
    params = net.parameters()
    analytic = [p.grad.copy() for p in params]

    rng = np.random.default_rng(probe_seed)
    worst = 0.0
    for pi, ci in _param_coords(params, n_probes, rng):
        value = params[pi].value
        orig = value.flat[ci]
        value.flat[ci] = orig + step
        lp = loss_at()
        value.flat[ci] = orig - step
        lm = loss_at()
        value.flat[ci] = orig
        fd = (lp - lm) / (2.0 * step)
        worst = max(worst, relative_error(analytic[pi].flat[ci], fd))
    return worst


def check_layer_gradients(
    layer: Layer,
    x: np.ndarray,
    n_probes: int = 40,
    step: float = STEP,
    probe_seed: int = 0,
    train: bool = True,
) -> float:
    """FD check of one layer under the surrogate loss sum(y * c).

    Probes both input coordinates and (if any) parameter coordinates.
    """
    rng = np.random.default_rng(probe_seed)
    mask_rng = lambda: stream(probe_seed, DOMAIN_DROPOUT)  # noqa: E731 - pinned masks

    y0 = layer.forward(x, train=train, rng=mask_rng())
    c = rng.standard_normal(y0.shape)

    def loss_at():
        return float((layer.forward(x, train=train, rng=mask_rng()) * c).sum())

    for p in layer.params.values():
        p.grad[...] = 0.0
    layer.forward(x, train=train, rng=mask_rng())
    dx = layer.backward(c)

    worst = 0.0
    n_input = max(1, n_probes // 2)
    for _ in range(n_input):
        ci = int(rng.integers(0, x.size))
        orig = x.flat[ci]
        x.flat[ci] = orig + step
        lp = loss_at()
        x.flat[ci] = orig - step
        lm = loss_at()
        x.flat[ci] = orig
        worst = max(worst, relative_error(dx.flat[ci], (lp - lm) / (2 * step)))

    params = list(layer.params.values())
    if params:
        for pi, ci in _param_coords(params, n_probes - n_input, rng):
            value = params[pi].value
            orig = value.flat[ci]
            value.flat[ci] = orig + step
            lp = loss_at()
            value.flat[ci] = orig - step
            lm = loss_at()
            value.flat[ci] = orig
            worst = max(worst, relative_error(params[pi].grad.flat[ci], (lp - lm) / (2 * step)))
    return worst
