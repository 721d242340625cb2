"""An ordered layer stack with fused softmax cross-entropy training."""

from __future__ import annotations

import numpy as np

from .layers import Layer, Param, Residual, Softmax
from .loss import softmax_xent, xent_grad


def _walk(layers, prefix=""):
    """Yield (name, layer) for every atomic layer, descending into residuals."""
    for i, layer in enumerate(layers):
        name = f"{prefix}L{i}"
        if isinstance(layer, Residual):
            yield from _walk(layer.main, f"{name}.main.")
            yield from _walk(layer.skip, f"{name}.skip.")
        else:
            yield name, layer


class Network:
    """Sequential network; the last layer must be Softmax for training."""

    def __init__(self, layers: list[Layer]):
        self.layers = layers

    def init_params(self, rng: np.random.Generator) -> None:
        for layer in self.layers:
            layer.init_params(rng)

    def forward(self, x, train: bool = False, rng: np.random.Generator | None = None):
        for layer in self.layers:
            x = layer.forward(x, train, rng)
        return x

    def forward_upto(self, x, index: int):
        """Eval-mode forward through layers [0, index]."""
        for layer in self.layers[: index + 1]:
            x = layer.forward(x, train=False)
        return x

    def predict_probs(self, x):
        return self.forward(x, train=False)

    def _softmax(self) -> Softmax:
        last = self.layers[-1]
        if not isinstance(last, Softmax):
            raise TypeError("training requires a terminal Softmax layer")
        return last

    def evaluate_loss(self, x, labels, train: bool = False, rng=None) -> float:
        self._softmax()
        out = x
        for layer in self.layers[:-1]:
            out = layer.forward(out, train, rng)
        _, loss = softmax_xent(out, labels)
        return loss

    def loss_and_grads(self, x, labels, rng=None) -> tuple[float, np.ndarray]:
        """Train-mode forward, fused softmax-xent, full backward pass.

        Gradients accumulate into each Param.grad (zeroed first).
        """
        self._softmax()
        self.zero_grads()
        out = x
        for layer in self.layers[:-1]:
            out = layer.forward(out, train=True, rng=rng)
        probs, loss = softmax_xent(out, labels)
        grad = xent_grad(probs, labels)
        for layer in reversed(self.layers[:-1]):
            grad = layer.backward(grad)
        return loss, probs

    def parameters(self) -> list[Param]:
        return [p for _, layer in _walk(self.layers) for p in layer.params.values()]

    def named_tensors(self) -> dict[str, np.ndarray]:
        out: dict[str, np.ndarray] = {}
        for name, layer in _walk(self.layers):
            for pname, param in layer.params.items():
                out[f"{name}.{pname}"] = param.value
            for bname, buf in layer.buffers.items():
                out[f"{name}.{bname}"] = buf
        return out

    def load_tensors(self, tensors: dict[str, np.ndarray]) -> None:
        """Copy named tensors in; raises KeyError/ValueError on mismatch."""
        for name, layer in _walk(self.layers):
            for pname, param in layer.params.items():
                src = tensors[f"{name}.{pname}"]
                if src.shape != param.value.shape:
                    raise ValueError(
                        f"{name}.{pname}: shape {src.shape} != {param.value.shape}"
                    )
                param.value = src.astype(param.value.dtype)
                param.grad = np.zeros_like(param.value)
            for bname in layer.buffers:
                src = tensors[f"{name}.{bname}"]
                if src.shape != layer.buffers[bname].shape:
                    raise ValueError(f"{name}.{bname}: bad shape {src.shape}")
                layer.buffers[bname] = src.astype(layer.buffers[bname].dtype)

    def zero_grads(self) -> None:
        for p in self.parameters():
            p.grad[...] = 0.0

    @property
    def num_params(self) -> int:
        return sum(p.value.size for p in self.parameters())
