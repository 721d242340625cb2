"""Scheme dispatcher: classify one cooperative sample under a fusion scheme."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from ..errors import ModelMissing, ShapeError
from ..models.features import extract_features
from ..models.zoo import Model
from ..sigsynth.sampling import CooperativeSample
from .pca import PcaModel, pca_project
from .stack import stack_signals
from .vote import LocalDecision, majority_vote


class FusionScheme(enum.Enum):
    SINGLE = "single"
    DECISION_VOTE = "decision"
    SIGNAL_STACK = "signal"
    FEATURE_CNN = "feature"
    FEATURE_PCA = "pca"


@dataclass
class ModelBundle:
    """The trained models a scheme may require."""

    cnn1: Model | None = None
    cnn2: Model | None = None
    cnn3: Model | None = None
    cnn3_pca: Model | None = None
    pca: PcaModel | None = None

    def require(self, name: str):
        model = getattr(self, name)
        if model is None:
            raise ModelMissing(f"scheme requires model {name!r}")
        return model


@dataclass
class Diagnostics:
    """Per-node intermediates produced on the way to the fused label."""

    decisions: list[LocalDecision] = field(default_factory=list)
    features: np.ndarray | None = None


def _frame_tensor(sample: CooperativeSample, node: int) -> np.ndarray:
    f = sample.frames[node]
    return np.stack([f.i, f.q])[None].astype(np.float32)


def cooperative_classify(
    scheme: FusionScheme,
    sample: CooperativeSample,
    models: ModelBundle,
) -> tuple[int, Diagnostics]:
    """Fused label plus per-node diagnostics for one sample."""
    diag = Diagnostics()

    if scheme is FusionScheme.SINGLE:
        cnn1 = models.require("cnn1")
        probs = cnn1.net.predict_probs(_frame_tensor(sample, 0))[0]
        diag.decisions = [LocalDecision.from_probs(0, probs)]
        return diag.decisions[0].label, diag

    if scheme is FusionScheme.DECISION_VOTE:
        cnn1 = models.require("cnn1")
        diag.decisions = [
            LocalDecision.from_probs(i, cnn1.net.predict_probs(_frame_tensor(sample, i))[0])
            for i in range(sample.n_nodes)
        ]
        return majority_vote(diag.decisions), diag

    if scheme is FusionScheme.SIGNAL_STACK:
        cnn2 = models.require("cnn2")
        x = stack_signals(sample)
        if x.shape[1] != cnn2.spec.input_channels:
            raise ShapeError(
                f"{cnn2.name} expects {cnn2.spec.input_channels} channels, got {x.shape[1]}"
            )
        probs = cnn2.net.predict_probs(x)[0]
        return int(probs.argmax()), diag

    if scheme is FusionScheme.FEATURE_CNN:
        cnn1 = models.require("cnn1")
        cnn3 = models.require("cnn3")
        feats = np.stack(
            [extract_features(cnn1, sample.frames[i]) for i in range(sample.n_nodes)]
        )
        diag.features = feats
        if feats.shape[0] != cnn3.spec.input_channels:
            raise ShapeError(f"{cnn3.name} expects {cnn3.spec.input_channels} nodes")
        probs = cnn3.net.predict_probs(feats[None])[0]
        return int(probs.argmax()), diag

    if scheme is FusionScheme.FEATURE_PCA:
        pca = models.require("pca")
        cnn3 = models.require("cnn3_pca")
        feats = np.stack(
            [pca_project(pca, sample.frames[i]) for i in range(sample.n_nodes)]
        ).astype(np.float32)
        diag.features = feats
        if feats.shape[0] != cnn3.spec.input_channels:
            raise ShapeError(f"{cnn3.name} expects {cnn3.spec.input_channels} nodes")
        probs = cnn3.net.predict_probs(feats[None])[0]
        return int(probs.argmax()), diag

    raise ValueError(f"unknown scheme {scheme}")
