"""Feature file format ("CSFT").

Layout (little-endian): magic "CSFT", u16 version=1, u32 feature_dim=32,
u32 n_nodes, u64 sample_count; per sample: u32 label, then
n_nodes x feature_dim f32. Produced by ``coopsig extract-features`` and
consumed by CNN3 training. A ``.meta.json`` sidecar records provenance.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from ..errors import DatasetCorrupt, IoError, UnsupportedFormat

MAGIC = b"CSFT"
VERSION = 1
N_COMPONENTS = 32
_HEADER = struct.Struct("<4sHIIQ")


def feature_sidecar(path) -> Path:
    p = Path(path)
    return p.with_name(p.stem + ".meta.json")


def write_features(path, labels: np.ndarray, features: np.ndarray, meta: dict | None = None) -> Path:
    """Write (S,) labels and (S, N, feature_dim) float32 features."""
    path = Path(path)
    labels = np.asarray(labels)
    features = np.ascontiguousarray(features, dtype="<f4")
    if features.ndim != 3 or len(labels) != len(features):
        raise ValueError(f"expected (S, N, d) features aligned with labels, got {features.shape}")
    s, n_nodes, dim = features.shape
    try:
        fh = open(path, "wb")
    except OSError as exc:
        raise IoError(str(exc)) from exc
    with fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, dim, n_nodes, s))
        for k in range(s):
            fh.write(struct.pack("<I", int(labels[k])))
            fh.write(features[k].tobytes())
    if meta is not None:
        feature_sidecar(path).write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return path


def read_features(path) -> tuple[np.ndarray, np.ndarray]:
    """Read back (labels (S,), features (S, N, feature_dim) float32)."""
    path = Path(path)
    with open(path, "rb") as fh:
        raw = fh.read(_HEADER.size)
        if len(raw) < _HEADER.size:
            raise DatasetCorrupt(f"{path}: truncated header")
        magic, version, dim, n_nodes, count = _HEADER.unpack(raw)
        if magic != MAGIC:
            raise UnsupportedFormat(f"{path}: bad magic {magic!r}")
        if version != VERSION:
            raise UnsupportedFormat(f"{path}: unsupported version {version}")
        rec = np.dtype([("label", "<u4"), ("feat", "<f4", (n_nodes, dim))])
        rows = np.fromfile(fh, dtype=rec)
    if len(rows) != count:
        raise DatasetCorrupt(f"{path}: header promises {count} samples, found {len(rows)}")
    return rows["label"].astype(np.int64), rows["feat"]


def read_feature_meta(path) -> dict | None:
    sidecar = feature_sidecar(path)
    return json.loads(sidecar.read_text()) if sidecar.exists() else None
