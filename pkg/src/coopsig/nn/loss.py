"""Softmax cross-entropy, numerically stabilized."""

from __future__ import annotations

import numpy as np

from ..errors import InvalidLabel
from ..sigsynth.modulations import CLASS_COUNT


def softmax_xent(logits: np.ndarray, labels: np.ndarray) -> tuple[np.ndarray, float]:
    """Return (probabilities, mean negative log-likelihood).

    Raises:
        InvalidLabel: if a label is outside [0, CLASS_COUNT).
    """
    labels = np.asarray(labels)
    if labels.size and (labels.min() < 0 or labels.max() >= CLASS_COUNT):
        raise InvalidLabel(f"labels must lie in [0, {CLASS_COUNT})")
    z = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(z)
    denom = e.sum(axis=1, keepdims=True)
    probs = e / denom
    log_probs = z - np.log(denom)
    loss = -float(np.mean(log_probs[np.arange(len(labels)), labels]))
    return probs, loss


def xent_grad(probs: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """d(mean xent)/d(logits) = (probs - onehot) / batch."""
    g = probs.copy()
    g[np.arange(len(labels)), labels] -= 1.0
    return g / len(labels)
