"""Training and extraction jobs with fingerprint-based resume."""

from __future__ import annotations

import json
import logging
from pathlib import Path

import numpy as np

from ..errors import PrerequisiteMissing
from ..fusion.feature_io import read_features, write_features
from ..fusion.pca import PcaModel, pca_fit, pca_project_batch
from ..fusion.stack import stack_signals_batch
from ..models.features import extract_features
from ..models.serialize import load_model, manifest_path, read_tensors, save_model, write_tensors
from ..models.zoo import Model, build_cnn1, build_cnn2, build_cnn3, new_model
from ..nn.optim import Hyperparameters
from ..nn.train import TrainHistory, fit
from ..sigsynth.datafile import config_fingerprint, load_dataset_arrays, sidecar_path

logger = logging.getLogger(__name__)

JOB_KINDS = ("cnn1", "cnn2", "cnn3", "cnn3-pca")


def history_path(model_path) -> Path:
    p = Path(model_path)
    return p.with_name(p.stem + ".history.json")


def _write_history(path: Path, history: TrainHistory, hyper: Hyperparameters, fingerprint: str):
    doc = {
        "history": history.to_json(),
        "hyper": hyper.to_json(),
        "fingerprint": fingerprint,
    }
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _dataset_fingerprint(dataset_path) -> str:
    meta = json.loads(sidecar_path(dataset_path).read_text())
    return config_fingerprint({"config": meta["fingerprint"], "seed": meta["seed"]})


def feature_source_fingerprint(feats_path) -> str:
    """Fingerprint of a CSFT file's provenance (its name plus sidecar meta)."""
    sidecar = Path(feats_path).with_name(Path(feats_path).stem + ".meta.json")
    meta = json.loads(sidecar.read_text()) if sidecar.exists() else None
    return config_fingerprint({"features": Path(feats_path).name, "meta": meta})


def _require(path, what: str) -> Path:
    path = Path(path)
    if not path.exists():
        raise PrerequisiteMissing(f"{what} not found at {path}")
    return path


def run_training_job(
    kind: str,
    inputs: dict[str, Path],
    hyper: Hyperparameters,
    out_model: Path,
    init_seed: int | None = None,
) -> tuple[Path, TrainHistory]:
    """Train one network and persist the model, manifest, and history.

    inputs by kind:
        cnn1:     {"dataset": <train .csig>}
        cnn2:     {"dataset": <multi-node train .csig>}
        cnn3:     {"features": <train .csft>, "cnn1": <cnn1 .csnn>}
        cnn3-pca: {"features": <pca train .csft>, "pca": <pca .csnn>}
    """
    if kind not in JOB_KINDS:
        raise ValueError(f"unknown job kind {kind!r}")
    out_model = Path(out_model)
    out_model.parent.mkdir(parents=True, exist_ok=True)
    init_seed = hyper.seed if init_seed is None else init_seed

    if kind in ("cnn1", "cnn2"):
        data = _require(inputs["dataset"], "training dataset")
        header, labels, _, iq = load_dataset_arrays(data)
        if kind == "cnn1":
            x = np.ascontiguousarray(iq[:, 0])
            spec = build_cnn1()
        else:
            x = stack_signals_batch(np.ascontiguousarray(iq))
            spec = build_cnn2(header.n_nodes)
        source_fp = _dataset_fingerprint(data)
    elif kind == "cnn3":
        feats_path = _require(inputs["features"], "feature file")
        _require(inputs["cnn1"], "CNN1 model")
        labels, feats = read_features(feats_path)
        x = np.ascontiguousarray(feats)
        spec = build_cnn3(feats.shape[1])
        source_fp = feature_source_fingerprint(feats_path)
    else:  # cnn3-pca
        feats_path = _require(inputs["features"], "PCA feature file")
        _require(inputs["pca"], "PCA model")
        labels, feats = read_features(feats_path)
        x = np.ascontiguousarray(feats)
        spec = build_cnn3(feats.shape[1])
        source_fp = feature_source_fingerprint(feats_path)

    fingerprint = config_fingerprint(
        {"kind": kind, "hyper": hyper.to_json(), "source": source_fp, "init_seed": init_seed}
    )
    logger.info("training %s on %d samples (%s)", kind, len(x), out_model.name)
    model = new_model(spec, seed=init_seed)
    history = fit(model.net, x, np.asarray(labels, dtype=np.int64), hyper)
    model.fingerprint = fingerprint
    save_model(model, out_model, fingerprint=fingerprint)
    _write_history(history_path(out_model), history, hyper, fingerprint)
    return out_model, history


def run_feature_extraction(
    cnn1_path: Path, dataset_path: Path, out_path: Path, batch_size: int = 256
) -> Path:
    """Extract per-node CNN1 features from a dataset into a CSFT file."""
    cnn1 = load_model(_require(cnn1_path, "CNN1 model"))
    _, labels, _, iq = load_dataset_arrays(_require(dataset_path, "dataset"))
    feats = np.stack(
        [
            extract_features(cnn1, np.ascontiguousarray(iq[:, i]), batch_size)
            for i in range(iq.shape[1])
        ],
        axis=1,
    )
    meta = {
        "source_dataset": str(Path(dataset_path).name),
        "model_fingerprint": cnn1.fingerprint,
        "feature_dim": feats.shape[2],
    }
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    return write_features(out_path, labels, feats, meta=meta)


PCA_TENSORS = ("mean", "components", "explained_variance")


def save_pca(model: PcaModel, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    write_tensors(
        path,
        {
            "mean": model.mean,
            "components": model.components,
            "explained_variance": model.explained_variance,
        },
    )
    manifest_path(path).write_text(
        json.dumps({"format": "PCA", "tensors": list(PCA_TENSORS)}, indent=2) + "\n"
    )
    return path


def load_pca(path) -> PcaModel:
    tensors = read_tensors(_require(path, "PCA model"))
    model = PcaModel(
        mean=tensors["mean"].astype(np.float64),
        components=tensors["components"].astype(np.float64),
        explained_variance=tensors["explained_variance"].astype(np.float64),
    )
    model.validate()
    return model


def run_pca_fit(dataset_path: Path, out_path: Path, n_components: int = 32) -> Path:
    """Fit one global PCA on training frames pooled across nodes."""
    _, _, _, iq = load_dataset_arrays(_require(dataset_path, "dataset"))
    s, n, _, length = iq.shape
    vectors = iq.reshape(s * n, 2 * length).astype(np.float64)
    logger.info("fitting PCA on %d vectors of dim %d", len(vectors), vectors.shape[1])
    model = pca_fit(vectors, n_components=n_components)
    return save_pca(model, out_path)


def run_pca_projection(
    pca_path: Path, dataset_path: Path, out_path: Path
) -> Path:
    """Project a dataset's frames into PCA features (CSFT)."""
    pca = load_pca(pca_path)
    _, labels, _, iq = load_dataset_arrays(_require(dataset_path, "dataset"))
    s, n, _, length = iq.shape
    feats = np.stack(
        [pca_project_batch(pca, iq[:, i].reshape(s, 2 * length)) for i in range(n)],
        axis=1,
    ).astype(np.float32)
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    meta = {"source_dataset": str(Path(dataset_path).name), "extractor": "pca"}
    return write_features(out_path, labels, feats, meta=meta)
