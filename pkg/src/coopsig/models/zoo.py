"""Network builders: CNN1 (single node), CNN2 (signal fusion), CNN3 (feature fusion).

All three end in a 12-way softmax. CNN1 carries a designated 32-unit
feature layer (the ReLU after the 32-wide dense); CNN2 differs from CNN1
only in its first convolution, which consumes 2N input channels; CNN3
classifies (N, 32) feature stacks with two hidden convolutional layers.

Blocks:
    ConBlock(k, M)  = Conv(k, Same, M) + BN + ReLU + MaxPool2
    ResBlock1(M)    = Conv(3, Same, M)+BN+ReLU -> Conv(3, Same, M)+BN,
                      identity skip, add, ReLU (shape preserving)
    ResBlock2(M)    = Conv(3, stride 2, M)+BN+ReLU -> Conv(3, Same, M)+BN,
                      skip Conv(1, stride 2, M)+BN, add, ReLU (halves length)

The second BN of each residual main branch initializes its scale to zero,
so at step 0 ResBlock1 computes ReLU(identity).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidNodeCount
from ..nn.layers import (
    BatchNorm1d,
    Conv1d,
    Dense,
    Dropout,
    GlobalAvgPool,
    MaxPool2,
    ReLU,
    Residual,
    Softmax,
)
from ..nn.network import Network
from ..rng import DOMAIN_INIT, stream
from ..sigsynth.modulations import CLASS_COUNT

FEATURE_DIM = 32


def _conv(in_ch, out_ch, kernel, stride=1):
    return {"kind": "conv1d", "in_channels": in_ch, "out_channels": out_ch,
            "kernel": kernel, "stride": stride}


def _bn(ch, zero_scale=False):
    return {"kind": "batchnorm", "channels": ch, "zero_scale": zero_scale}


def con_block(in_ch: int, m: int, k: int) -> list[dict]:
    return [_conv(in_ch, m, k), _bn(m), {"kind": "relu"}, {"kind": "maxpool2"}]


def res_block1(m: int) -> dict:
    return {
        "kind": "residual",
        "main": [_conv(m, m, 3), _bn(m), {"kind": "relu"}, _conv(m, m, 3), _bn(m, True)],
        "skip": [],
    }


def res_block2(in_ch: int, m: int) -> dict:
    return {
        "kind": "residual",
        "main": [_conv(in_ch, m, 3, stride=2), _bn(m), {"kind": "relu"},
                 _conv(m, m, 3), _bn(m, True)],
        "skip": [_conv(in_ch, m, 1, stride=2), _bn(m)],
    }


@dataclass
class NetworkSpec:
    """Declarative architecture: serialized into the model manifest."""

    name: str
    n_nodes: int
    input_channels: int
    input_length: int
    layers: list[dict] = field(default_factory=list)
    feature_layer_index: int | None = None

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "n_nodes": self.n_nodes,
            "input_channels": self.input_channels,
            "input_length": self.input_length,
            "layers": self.layers,
            "feature_layer_index": self.feature_layer_index,
        }

    @classmethod
    def from_json(cls, d: dict) -> "NetworkSpec":
        return cls(
            name=d["name"],
            n_nodes=d["n_nodes"],
            input_channels=d["input_channels"],
            input_length=d["input_length"],
            layers=d["layers"],
            feature_layer_index=d.get("feature_layer_index"),
        )


def build_cnn1(dropout: float = 0.5) -> NetworkSpec:
    """Single-node classifier on (2, 512) IQ frames."""
    layers = [
        *con_block(2, 32, 7),
        res_block1(32),
        res_block2(32, 64),
        res_block1(64),
        res_block2(64, 128),
        res_block1(128),
        {"kind": "global_avg_pool"},
        {"kind": "dense", "in_features": 128, "out_features": 128},
        {"kind": "relu"},
        {"kind": "dropout", "p": dropout},
        {"kind": "dense", "in_features": 128, "out_features": FEATURE_DIM},
        {"kind": "relu"},  # feature layer: post-ReLU 32-dim activations
        {"kind": "dense", "in_features": FEATURE_DIM, "out_features": CLASS_COUNT},
        {"kind": "softmax"},
    ]
    spec = NetworkSpec(
        name="CNN1", n_nodes=1, input_channels=2, input_length=512,
        layers=layers, feature_layer_index=len(layers) - 3,
    )
    assert length_trace(spec) == [512, 256, 256, 128, 128, 64, 64, 1]
    return spec


def build_cnn2(n_nodes: int, dropout: float = 0.5) -> NetworkSpec:
    """Signal-fusion classifier on (2N, 512) stacked IQ frames."""
    if n_nodes < 1:
        raise InvalidNodeCount(f"n_nodes {n_nodes} < 1")
    spec = build_cnn1(dropout=dropout)
    spec.name = f"CNN2(N={n_nodes})"
    spec.n_nodes = n_nodes
    spec.input_channels = 2 * n_nodes
    spec.layers[0] = _conv(2 * n_nodes, 32, 7)
    spec.feature_layer_index = None
    assert length_trace(spec) == [512, 256, 256, 128, 128, 64, 64, 1]
    return spec


def build_cnn3(n_nodes: int) -> NetworkSpec:
    """Feature-fusion classifier on (N, 32) stacked feature vectors."""
    if n_nodes < 1:
        raise InvalidNodeCount(f"n_nodes {n_nodes} < 1")
    layers = [
        _conv(n_nodes, 64, 3),
        _bn(64),
        {"kind": "relu"},
        _conv(64, 64, 3),
        _bn(64),
        {"kind": "relu"},
        {"kind": "global_avg_pool"},
        {"kind": "dense", "in_features": 64, "out_features": CLASS_COUNT},
        {"kind": "softmax"},
    ]
    return NetworkSpec(
        name=f"CNN3(N={n_nodes})", n_nodes=n_nodes,
        input_channels=n_nodes, input_length=FEATURE_DIM, layers=layers,
    )


def _make_layer(entry: dict, dtype):
    kind = entry["kind"]
    if kind == "conv1d":
        return Conv1d(entry["in_channels"], entry["out_channels"], entry["kernel"],
                      entry["stride"], dtype=dtype)
    if kind == "batchnorm":
        return BatchNorm1d(entry["channels"], entry.get("zero_scale", False), dtype=dtype)
    if kind == "relu":
        return ReLU()
    if kind == "maxpool2":
        return MaxPool2()
    if kind == "global_avg_pool":
        return GlobalAvgPool()
    if kind == "dense":
        return Dense(entry["in_features"], entry["out_features"], dtype=dtype)
    if kind == "dropout":
        return Dropout(entry["p"])
    if kind == "softmax":
        return Softmax()
    if kind == "residual":
        main = [_make_layer(e, dtype) for e in entry["main"]]
        skip = [_make_layer(e, dtype) for e in entry["skip"]]
        return Residual(main, skip)
    raise ValueError(f"unknown layer kind {kind!r}")


def realize(spec: NetworkSpec, seed: int = 0, dtype=np.float32) -> Network:
    """Instantiate the spec with seeded initialization."""
    net = Network([_make_layer(e, dtype) for e in spec.layers])
    net.init_params(stream(seed, DOMAIN_INIT))
    return net


def length_trace(spec: NetworkSpec) -> list[int]:
    """Lengths after the input and after each length-changing stage."""
    t = spec.input_length
    trace = [t]
    for entry in spec.layers:
        kind = entry["kind"]
        if kind == "conv1d" and entry["stride"] == 2:
            t = -(-t // 2)
        elif kind == "maxpool2":
            t = (t + 1) // 2
            trace.append(t)
        elif kind == "residual":
            strides = [e.get("stride", 1) for e in entry["main"] if e["kind"] == "conv1d"]
            if 2 in strides:
                t = -(-t // 2)
            trace.append(t)
        elif kind == "global_avg_pool":
            trace.append(1)
    return trace


@dataclass
class Model:
    """A realized network plus its declarative spec and provenance."""

    spec: NetworkSpec
    net: Network
    fingerprint: str | None = None

    @property
    def name(self) -> str:
        return self.spec.name

    @property
    def n_nodes(self) -> int:
        return self.spec.n_nodes


def new_model(spec: NetworkSpec, seed: int = 0) -> Model:
    return Model(spec=spec, net=realize(spec, seed))
