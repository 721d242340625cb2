"""Model container ("CSNN") and architecture manifest.

Container layout (little-endian): magic "CSNN", u16 version=1,
u32 tensor_count, then per tensor: u16 name length, UTF-8 name, u8 rank,
u32 dims[rank], f32 payload row-major. The manifest sidecar ``.arch.json``
lists the layer spec, tensor shapes, the feature-layer index, and the
training configuration fingerprint.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from ..errors import IoError, ModelCorrupt, UnsupportedFormat
from .zoo import Model, NetworkSpec, realize

MAGIC = b"CSNN"
VERSION = 1


def manifest_path(path) -> Path:
    p = Path(path)
    return p.with_name(p.stem + ".arch.json")


def write_tensors(path, tensors: dict[str, np.ndarray]) -> None:
    try:
        fh = open(path, "wb")
    except OSError as exc:
        raise IoError(str(exc)) from exc
    with fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<HI", VERSION, len(tensors)))
        for name in sorted(tensors):
            arr = np.ascontiguousarray(tensors[name], dtype="<f4")
            nameb = name.encode()
            fh.write(struct.pack("<H", len(nameb)))
            fh.write(nameb)
            fh.write(struct.pack("<B", arr.ndim))
            fh.write(struct.pack(f"<{arr.ndim}I", *arr.shape))
            fh.write(arr.tobytes())


def read_tensors(path) -> dict[str, np.ndarray]:
    path = Path(path)
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != MAGIC:
            raise UnsupportedFormat(f"{path}: bad magic {magic!r}")
        head = fh.read(6)
        if len(head) < 6:
            raise ModelCorrupt(f"{path}: truncated header")
        version, count = struct.unpack("<HI", head)
        if version != VERSION:
            raise UnsupportedFormat(f"{path}: unsupported version {version}")
        tensors: dict[str, np.ndarray] = {}
        for _ in range(count):
            raw = fh.read(2)
            if len(raw) < 2:
                raise ModelCorrupt(f"{path}: truncated tensor name length")
            (name_len,) = struct.unpack("<H", raw)
            name = fh.read(name_len).decode()
            rank_raw = fh.read(1)
            if not rank_raw:
                raise ModelCorrupt(f"{path}: truncated tensor rank")
            rank = rank_raw[0]
            dims_raw = fh.read(4 * rank)
            if len(dims_raw) < 4 * rank:
                raise ModelCorrupt(f"{path}: truncated tensor dims")
            dims = struct.unpack(f"<{rank}I", dims_raw)
            n_bytes = 4 * int(np.prod(dims, dtype=np.int64)) if rank else 4
            payload = fh.read(n_bytes)
            if len(payload) < n_bytes:
                raise ModelCorrupt(f"{path}: truncated payload for {name!r}")
            tensors[name] = np.frombuffer(payload, dtype="<f4").reshape(dims).copy()
    return tensors


def save_model(model: Model, path, fingerprint: str | None = None) -> Path:
    """Write the tensor container plus the .arch.json manifest."""
    path = Path(path)
    tensors = model.net.named_tensors()
    write_tensors(path, tensors)
    manifest = {
        "format": "CSNN",
        "version": VERSION,
        "spec": model.spec.to_json(),
        "tensors": {name: list(t.shape) for name, t in sorted(tensors.items())},
        "training_fingerprint": fingerprint or model.fingerprint,
    }
    manifest_path(path).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def load_model(path) -> Model:
    """Rebuild the model; save-then-load reproduces predictions bitwise."""
    path = Path(path)
    mpath = manifest_path(path)
    if not mpath.exists():
        raise ModelCorrupt(f"missing manifest {mpath}")
    manifest = json.loads(mpath.read_text())
    spec = NetworkSpec.from_json(manifest["spec"])
    tensors = read_tensors(path)

    for name, shape in manifest["tensors"].items():
        if name not in tensors:
            raise ModelCorrupt(f"{path}: tensor {name!r} missing from container")
        if list(tensors[name].shape) != list(shape):
            raise ModelCorrupt(
                f"{path}: tensor {name!r} shape {tensors[name].shape} != manifest {shape}"
            )

    net = realize(spec, seed=0)
    try:
        net.load_tensors(tensors)
    except (KeyError, ValueError) as exc:
        raise ModelCorrupt(f"{path}: {exc}") from exc
    return Model(spec=spec, net=net, fingerprint=manifest.get("training_fingerprint"))
