"""Majority voting over per-node local decisions.

Tie-break chain: occurrence count, then summed confidence over the tied
labels, then lowest label index. Deterministic and invariant under
permutation of the input decisions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import EmptyVote
from ..sigsynth.modulations import CLASS_COUNT


@dataclass
class LocalDecision:
    """One node's classification: argmax label plus the confidence row."""

    node_id: int
    label: int
    confidence: np.ndarray

    def __post_init__(self):
        self.confidence = np.asarray(self.confidence, dtype=np.float64)
        if self.confidence.shape != (CLASS_COUNT,):
            raise ValueError(f"confidence must have {CLASS_COUNT} entries")
        if abs(self.confidence.sum() - 1.0) > 1e-6:
            raise ValueError("confidence row must sum to 1")
        if self.label != int(self.confidence.argmax()):
            raise ValueError("label must be the argmax of the confidence row")

    @classmethod
    def from_probs(cls, node_id: int, probs: np.ndarray) -> "LocalDecision":
        return cls(node_id=node_id, label=int(np.argmax(probs)), confidence=probs)


def majority_vote(decisions: list[LocalDecision]) -> int:
    """The label with the most occurrences, tie-broken as documented."""
    if not decisions:
        raise EmptyVote("no decisions to fuse")
    counts = np.zeros(CLASS_COUNT, dtype=np.int64)
    scores = np.zeros(CLASS_COUNT, dtype=np.float64)
    for d in decisions:
        counts[d.label] += 1
        scores += d.confidence
    top = counts.max()
    tied = counts == top
    masked = np.where(tied, scores, -np.inf)
    return int(masked.argmax())  # argmax breaks residual ties by lowest index


def vote_batch(probs: np.ndarray) -> np.ndarray:
    """Vectorized majority_vote over (S, N, CLASS_COUNT) confidence stacks."""
    if probs.ndim != 3 or probs.shape[2] != CLASS_COUNT:
        raise ValueError(f"expected (S, N, {CLASS_COUNT}), got {probs.shape}")
    preds = probs.argmax(axis=2)  # (S, N)
    onehot = preds[..., None] == np.arange(CLASS_COUNT)
    counts = onehot.sum(axis=1)  # (S, CLASS_COUNT)
    scores = probs.sum(axis=1)
    tied = counts == counts.max(axis=1, keepdims=True)
    masked = np.where(tied, scores, -np.inf)
    return masked.argmax(axis=1)
