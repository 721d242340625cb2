"""Accuracy-vs-SNR curves and SNR-gain measurement."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import GainUndefined, ShapeError
from ..fusion.classify import FusionScheme, ModelBundle
from ..fusion.pca import pca_project_batch
from ..fusion.stack import stack_signals_batch
from ..fusion.vote import vote_batch
from ..models.features import extract_features
from ..nn.train import predict
from ..sigsynth.datafile import StoredDataset


@dataclass
class AccuracyCurve:
    """Per-SNR accuracy for one (scheme, node count); the report unit."""

    scheme: str
    n_nodes: int
    snr_db: list[float]
    accuracy: list[float]
    n_test: list[int]

    def __post_init__(self):
        if np.any(np.diff(self.snr_db) <= 0):
            raise ValueError("SNR points must be strictly increasing")
        if not all(0.0 <= a <= 1.0 for a in self.accuracy):
            raise ValueError("accuracies must lie in [0, 1]")

    @property
    def curve_id(self) -> str:
        return f"{self.scheme}-n{self.n_nodes}"

    def to_json(self) -> dict:
        return {
            "scheme": self.scheme,
            "n_nodes": self.n_nodes,
            "snr_db": self.snr_db,
            "accuracy": self.accuracy,
            "n_test": self.n_test,
        }

    @classmethod
    def from_json(cls, d: dict) -> "AccuracyCurve":
        return cls(
            scheme=d["scheme"], n_nodes=d["n_nodes"], snr_db=list(d["snr_db"]),
            accuracy=list(d["accuracy"]), n_test=list(d["n_test"]),
        )


@dataclass
class SnrGain:
    """Horizontal curve shift at the threshold crossing, in dB."""

    reference_id: str
    improved_id: str
    threshold: float
    gain_db: float | None

    def to_json(self) -> dict:
        return {
            "reference": self.reference_id,
            "improved": self.improved_id,
            "threshold": self.threshold,
            "gain_db": self.gain_db,
        }


def node_probs(bundle: ModelBundle, iq: np.ndarray, batch_size: int = 256) -> np.ndarray:
    """CNN1 confidence rows per node: (S, N, 12)."""
    cnn1 = bundle.require("cnn1")
    return np.stack(
        [predict(cnn1.net, np.ascontiguousarray(iq[:, i]), batch_size) for i in range(iq.shape[1])],
        axis=1,
    )


def node_features(bundle: ModelBundle, iq: np.ndarray, batch_size: int = 256) -> np.ndarray:
    """CNN1 feature vectors per node: (S, N, 32)."""
    cnn1 = bundle.require("cnn1")
    return np.stack(
        [
            extract_features(cnn1, np.ascontiguousarray(iq[:, i]), batch_size)
            for i in range(iq.shape[1])
        ],
        axis=1,
    )


def scheme_predictions(
    scheme: FusionScheme,
    iq: np.ndarray,
    bundle: ModelBundle,
    batch_size: int = 256,
    probs: np.ndarray | None = None,
    features: np.ndarray | None = None,
) -> np.ndarray:
    """Fused labels for a whole (S, N, 2, L) evaluation tensor.

    ``probs``/``features`` allow reusing per-node CNN1 passes across
    schemes; when given they must come from node_probs/node_features on the
    same tensor.
    """
    s, n, two, length = iq.shape
    if two != 2:
        raise ShapeError(f"expected (S, N, 2, L), got {iq.shape}")

    if scheme is FusionScheme.SINGLE:
        cnn1 = bundle.require("cnn1")
        p = probs[:, 0] if probs is not None else predict(
            cnn1.net, np.ascontiguousarray(iq[:, 0]), batch_size
        )
        return p.argmax(axis=1)

    if scheme is FusionScheme.DECISION_VOTE:
        p = probs if probs is not None else node_probs(bundle, iq, batch_size)
        return vote_batch(p)

    if scheme is FusionScheme.SIGNAL_STACK:
        cnn2 = bundle.require("cnn2")
        if cnn2.spec.input_channels != 2 * n:
            raise ShapeError(f"{cnn2.name} expects {cnn2.spec.input_channels // 2} nodes, got {n}")
        stacked = stack_signals_batch(np.ascontiguousarray(iq))
        return predict(cnn2.net, stacked, batch_size).argmax(axis=1)

    if scheme is FusionScheme.FEATURE_CNN:
        cnn3 = bundle.require("cnn3")
        feats = features if features is not None else node_features(bundle, iq, batch_size)
        if cnn3.spec.input_channels != n:
            raise ShapeError(f"{cnn3.name} expects {cnn3.spec.input_channels} nodes, got {n}")
        return predict(cnn3.net, feats.astype(np.float32), batch_size).argmax(axis=1)

    if scheme is FusionScheme.FEATURE_PCA:
        pca = bundle.require("pca")
        cnn3 = bundle.require("cnn3_pca")
        if cnn3.spec.input_channels != n:
            raise ShapeError(f"{cnn3.name} expects {cnn3.spec.input_channels} nodes, got {n}")
        feats = np.stack(
            [pca_project_batch(pca, iq[:, i].reshape(s, 2 * length)) for i in range(n)],
            axis=1,
        ).astype(np.float32)
        return predict(cnn3.net, feats, batch_size).argmax(axis=1)

    raise ValueError(f"unknown scheme {scheme}")


def accuracy_by_snr(
    scheme_name: str,
    n_nodes: int,
    ds: StoredDataset,
    predicted: np.ndarray,
) -> AccuracyCurve:
    """Group correct/total by the dataset's per-cell base SNR."""
    grid = sorted(set(ds.snr_grid_db.tolist()))
    accs, counts = [], []
    for snr in grid:
        mask = ds.base_snr_db == snr
        total = int(mask.sum())
        correct = int((predicted[mask] == ds.labels[mask]).sum())
        accs.append(correct / total if total else 0.0)
        counts.append(total)
    return AccuracyCurve(
        scheme=scheme_name, n_nodes=n_nodes, snr_db=list(grid), accuracy=accs, n_test=counts
    )


def evaluate_accuracy_by_snr(
    scheme: FusionScheme,
    bundle: ModelBundle,
    dataset,
    scheme_name: str | None = None,
    batch_size: int = 256,
) -> AccuracyCurve:
    """End-to-end: load (or accept) a dataset, predict, and group by SNR."""
    ds = dataset if isinstance(dataset, StoredDataset) else StoredDataset(dataset)
    predicted = scheme_predictions(scheme, ds.iq, bundle, batch_size)
    n_nodes = 1 if scheme is FusionScheme.SINGLE else ds.header.n_nodes
    return accuracy_by_snr(scheme_name or scheme.value, n_nodes, ds, predicted)


def _first_upward_crossing(snr, acc, threshold) -> float | None:
    if acc[0] >= threshold:
        return float(snr[0])
    for i in range(len(acc) - 1):
        if acc[i] < threshold <= acc[i + 1]:
            frac = (threshold - acc[i]) / (acc[i + 1] - acc[i])
            return float(snr[i] + frac * (snr[i + 1] - snr[i]))
    return None


def snr_gain(
    reference: AccuracyCurve, improved: AccuracyCurve, threshold: float = 0.5
) -> SnrGain:
    """reference crossing minus improved crossing, linearly interpolated.

    Raises:
        GainUndefined: if either curve never crosses the threshold.
    """
    if reference.snr_db != improved.snr_db:
        raise ValueError("curves must share the SNR grid")
    ref_cross = _first_upward_crossing(reference.snr_db, reference.accuracy, threshold)
    imp_cross = _first_upward_crossing(improved.snr_db, improved.accuracy, threshold)
    if ref_cross is None or imp_cross is None:
        raise GainUndefined(
            f"threshold {threshold} not crossed by "
            f"{reference.curve_id if ref_cross is None else improved.curve_id}"
        )
    return SnrGain(
        reference_id=reference.curve_id,
        improved_id=improved.curve_id,
        threshold=threshold,
        gain_db=ref_cross - imp_cross,
    )
