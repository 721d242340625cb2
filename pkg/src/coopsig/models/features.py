"""Feature extraction from CNN1's designated 32-unit layer (post-ReLU)."""

from __future__ import annotations

import numpy as np

from ..errors import NoFeatureLayer
from ..sigsynth.channel import IQFrame
from .zoo import FEATURE_DIM, Model


def _as_batch(frames) -> tuple[np.ndarray, bool]:
    if isinstance(frames, IQFrame):
        return np.stack([frames.i, frames.q])[None], True
    arr = np.asarray(frames, dtype=np.float32)
    if arr.ndim == 2:
        return arr[None], True
    return arr, False


def extract_features(model: Model, frames, batch_size: int = 256) -> np.ndarray:
    """Feature vectors for one frame ((2, L) or IQFrame) or a (B, 2, L) batch.

    Deterministic eval-mode forward; entries are nonnegative by
    construction (post-ReLU).

    Raises:
        NoFeatureLayer: for models without a designated feature layer.
    """
    idx = model.spec.feature_layer_index
    if idx is None:
        raise NoFeatureLayer(f"{model.name} has no feature layer")
    x, single = _as_batch(frames)
    outs = [
        model.net.forward_upto(x[s : s + batch_size], idx)
        for s in range(0, len(x), batch_size)
    ]
    feats = np.concatenate(outs, axis=0).astype(np.float32)
    assert feats.shape[1] == FEATURE_DIM
    return feats[0] if single else feats
