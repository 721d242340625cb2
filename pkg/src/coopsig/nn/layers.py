"""Layer forward/backward passes for 1-D convolutional classifiers.

Tensors are (batch, channels, length) row-major; dense layers take
(batch, features). Convolution uses cross-correlation semantics with Same
padding: k-1 zeros total, floor((k-1)/2) on the left, and stride 2 yields
ceil(T/2) outputs. Training runs in float32; gradient checks build the
same layers in float64.
"""

from __future__ import annotations

import numpy as np

from ..errors import ShapeError

BN_EPS = 1e-5
BN_MOMENTUM = 0.1


class Param:
    __slots__ = ("value", "grad")

    def __init__(self, value: np.ndarray):
        self.value = value
        self.grad = np.zeros_like(value)


class Layer:
    """Base layer: parameters, buffers, forward/backward."""

    def __init__(self):
        self.params: dict[str, Param] = {}
        self.buffers: dict[str, np.ndarray] = {}

    def init_params(self, rng: np.random.Generator) -> None:
        pass

    def forward(self, x, train: bool = False, rng: np.random.Generator | None = None):
        raise NotImplementedError

    def backward(self, dy):
        raise NotImplementedError


class Conv1d(Layer):
    def __init__(self, in_channels: int, out_channels: int, kernel: int, stride: int = 1,
                 dtype=np.float32):
        super().__init__()
        if stride not in (1, 2):
            raise ValueError("stride must be 1 or 2")
        self.in_channels = in_channels
        self.out_channels = out_channels
        self.kernel = kernel
        self.stride = stride
        self.dtype = dtype
        self.params["weight"] = Param(np.zeros((out_channels, in_channels, kernel), dtype=dtype))
        self.params["bias"] = Param(np.zeros(out_channels, dtype=dtype))

    def init_params(self, rng):
        fan_in = self.in_channels * self.kernel
        w = rng.standard_normal(self.params["weight"].value.shape) * np.sqrt(2.0 / fan_in)
        self.params["weight"].value = w.astype(self.dtype)
        self.params["bias"].value = np.zeros(self.out_channels, dtype=self.dtype)

    def out_length(self, t: int) -> int:
        return -(-t // self.stride)  # ceil(T / stride)

    def _padding(self, t: int) -> tuple[int, int]:
        out = self.out_length(t)
        total = max(0, (out - 1) * self.stride + self.kernel - t)
        left = min((self.kernel - 1) // 2, total)
        return left, total - left

    def forward(self, x, train=False, rng=None):
        if x.ndim != 3 or x.shape[1] != self.in_channels:
            raise ShapeError(
                f"conv1d expects (B, {self.in_channels}, T), got {x.shape}"
            )
        b, _, t = x.shape
        left, right = self._padding(t)
        xp = np.pad(x, ((0, 0), (0, 0), (left, right)))
        windows = np.lib.stride_tricks.sliding_window_view(xp, self.kernel, axis=2)
        windows = windows[:, :, :: self.stride]  # (B, C, T_out, k)
        self._cache = (windows, t, left)
        w = self.params["weight"].value
        y = np.tensordot(windows, w, axes=([1, 3], [1, 2]))  # (B, T_out, M)
        y = np.ascontiguousarray(y.transpose(0, 2, 1))
        y += self.params["bias"].value[:, None]
        return y

    def backward(self, dy):
        windows, t, left = self._cache
        w = self.params["weight"].value
        self.params["bias"].grad += dy.sum(axis=(0, 2))
        self.params["weight"].grad += np.tensordot(dy, windows, axes=([0, 2], [0, 2]))
        dcols = np.tensordot(dy, w, axes=([1], [0]))  # (B, T_out, C, k)
        b, t_out = dy.shape[0], dy.shape[2]
        pad_t = t + sum(self._padding(t))
        dxp = np.zeros((b, self.in_channels, pad_t), dtype=dy.dtype)
        span = self.stride * (t_out - 1) + 1
        for j in range(self.kernel):
            dxp[:, :, j : j + span : self.stride] += dcols[:, :, :, j].transpose(0, 2, 1)
        return dxp[:, :, left : left + t]


class BatchNorm1d(Layer):
    """Per-channel batch norm over (batch, length).

    Normalization and the running-stat update both use the biased batch
    variance; eps and momentum are pinned module constants.
    """

    def __init__(self, channels: int, zero_scale: bool = False, dtype=np.float32):
        super().__init__()
        self.channels = channels
        self.zero_scale = zero_scale
        self.dtype = dtype
        init_gamma = 0.0 if zero_scale else 1.0
        self.params["gamma"] = Param(np.full(channels, init_gamma, dtype=dtype))
        self.params["beta"] = Param(np.zeros(channels, dtype=dtype))
        self.buffers["running_mean"] = np.zeros(channels, dtype=dtype)
        self.buffers["running_var"] = np.ones(channels, dtype=dtype)

    def init_params(self, rng):
        self.params["gamma"].value = np.full(
            self.channels, 0.0 if self.zero_scale else 1.0, dtype=self.dtype
        )
        self.params["beta"].value = np.zeros(self.channels, dtype=self.dtype)
        self.buffers["running_mean"] = np.zeros(self.channels, dtype=self.dtype)
        self.buffers["running_var"] = np.ones(self.channels, dtype=self.dtype)

    def forward(self, x, train=False, rng=None):
        if x.ndim != 3 or x.shape[1] != self.channels:
            raise ShapeError(f"batchnorm expects (B, {self.channels}, T), got {x.shape}")
        gamma = self.params["gamma"].value
        beta = self.params["beta"].value
        if train:
            mean = x.mean(axis=(0, 2))
            var = x.var(axis=(0, 2))
            self.buffers["running_mean"] = (
                (1 - BN_MOMENTUM) * self.buffers["running_mean"] + BN_MOMENTUM * mean
            ).astype(self.dtype)
            self.buffers["running_var"] = (
                (1 - BN_MOMENTUM) * self.buffers["running_var"] + BN_MOMENTUM * var
            ).astype(self.dtype)
        else:
            mean = self.buffers["running_mean"]
            var = self.buffers["running_var"]
        inv_std = 1.0 / np.sqrt(var + BN_EPS)
        xhat = (x - mean[:, None]) * inv_std[:, None]
        self._cache = (xhat, inv_std.astype(x.dtype), train)
        return gamma[:, None] * xhat + beta[:, None]

    def backward(self, dy):
        xhat, inv_std, train = self._cache
        gamma = self.params["gamma"].value
        self.params["beta"].grad += dy.sum(axis=(0, 2))
        self.params["gamma"].grad += (dy * xhat).sum(axis=(0, 2))
        dxhat = dy * gamma[:, None]
        if not train:
            return dxhat * inv_std[:, None]
        n = dy.shape[0] * dy.shape[2]
        s1 = dxhat.sum(axis=(0, 2), keepdims=True)
        s2 = (dxhat * xhat).sum(axis=(0, 2), keepdims=True)
        return (inv_std[:, None] / n) * (n * dxhat - s1 - xhat * s2)


class ReLU(Layer):
    def forward(self, x, train=False, rng=None):
        mask = x > 0
        self._cache = mask
        return x * mask

    def backward(self, dy):
        return dy * self._cache


class MaxPool2(Layer):
    """Non-overlapping window-2 max pool; odd lengths pad one -inf element."""

    def forward(self, x, train=False, rng=None):
        b, c, t = x.shape
        self._t = t
        if t % 2:
            x = np.concatenate([x, np.full((b, c, 1), -np.inf, dtype=x.dtype)], axis=2)
        xr = x.reshape(b, c, -1, 2)
        idx = xr.argmax(axis=3)
        self._cache = (idx, xr.shape)
        return np.take_along_axis(xr, idx[..., None], axis=3)[..., 0]

    def backward(self, dy):
        idx, shape = self._cache
        dxr = np.zeros(shape, dtype=dy.dtype)
        np.put_along_axis(dxr, idx[..., None], dy[..., None], axis=3)
        return dxr.reshape(shape[0], shape[1], -1)[:, :, : self._t]


class GlobalAvgPool(Layer):
    """(B, C, T) -> (B, C)."""

    def forward(self, x, train=False, rng=None):
        self._t = x.shape[2]
        return x.mean(axis=2)

    def backward(self, dy):
        return np.repeat(dy[:, :, None], self._t, axis=2) / self._t


class Dense(Layer):
    def __init__(self, in_features: int, out_features: int, dtype=np.float32):
        super().__init__()
        self.in_features = in_features
        self.out_features = out_features
        self.dtype = dtype
        self.params["weight"] = Param(np.zeros((out_features, in_features), dtype=dtype))
        self.params["bias"] = Param(np.zeros(out_features, dtype=dtype))

    def init_params(self, rng):
        w = rng.standard_normal((self.out_features, self.in_features))
        self.params["weight"].value = (w * np.sqrt(2.0 / self.in_features)).astype(self.dtype)
        self.params["bias"].value = np.zeros(self.out_features, dtype=self.dtype)

    def forward(self, x, train=False, rng=None):
        if x.ndim != 2 or x.shape[1] != self.in_features:
            raise ShapeError(f"dense expects (B, {self.in_features}), got {x.shape}")
        self._cache = x
        return x @ self.params["weight"].value.T + self.params["bias"].value

    def backward(self, dy):
        x = self._cache
        self.params["weight"].grad += dy.T @ x
        self.params["bias"].grad += dy.sum(axis=0)
        return dy @ self.params["weight"].value


class Dropout(Layer):
    """Inverted dropout: train zeroes units with probability p and rescales."""

    def __init__(self, p: float):
        super().__init__()
        if not 0.0 <= p < 1.0:
            raise ValueError(f"dropout probability {p} outside [0, 1)")
        self.p = p

    def forward(self, x, train=False, rng=None):
        if not train or self.p == 0.0:
            self._cache = None
            return x
        if rng is None:
            raise ValueError("dropout in train mode needs an rng")
        mask = (rng.random(x.shape) >= self.p).astype(x.dtype) / (1.0 - self.p)
        self._cache = mask
        return x * mask

    def backward(self, dy):
        return dy if self._cache is None else dy * self._cache


class Softmax(Layer):
    """Row softmax with max subtraction; caches logits for the fused loss."""

    def forward(self, x, train=False, rng=None):
        self.logits = x
        z = x - x.max(axis=1, keepdims=True)
        e = np.exp(z)
        self.probs = e / e.sum(axis=1, keepdims=True)
        return self.probs

    def backward(self, dy):
        dot = (dy * self.probs).sum(axis=1, keepdims=True)
        return self.probs * (dy - dot)


class Residual(Layer):
    """Main branch plus skip branch, added then passed through ReLU.

    Backward accumulates the two branch gradients additively.
    """

    def __init__(self, main: list[Layer], skip: list[Layer] | None = None):
        super().__init__()
        self.main = main
        self.skip = skip or []

    def init_params(self, rng):
        for layer in [*self.main, *self.skip]:
            layer.init_params(rng)

    def forward(self, x, train=False, rng=None):
        a = x
        for layer in self.main:
            a = layer.forward(a, train, rng)
        s = x
        for layer in self.skip:
            s = layer.forward(s, train, rng)
        pre = a + s
        self._mask = pre > 0
        return pre * self._mask

    def backward(self, dy):
        dpre = dy * self._mask
        da = dpre
        for layer in reversed(self.main):
            da = layer.backward(da)
        ds = dpre
        for layer in reversed(self.skip):
            ds = layer.backward(ds)
        return da + ds
