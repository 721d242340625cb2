"""Suite orchestration: datasets, training jobs, evaluation, reports.

Artifacts live under the experiment's out_dir::

    datasets/   *.csig + *.meta.json
    models/     *.csnn + *.arch.json + *.history.json
    features/   *.csft + *.meta.json
    reports/    <suite>/curves.csv curves.svg summary.json

Every step is resumable: a dataset is regenerated only if its sidecar's
(config fingerprint, seed) differ, a model retrained only if its manifest
fingerprint differs, and a finished suite is reloaded from its
summary.json when the configuration matches.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import GainUndefined, PrerequisiteMissing
from ..fusion.classify import FusionScheme, ModelBundle
from ..fusion.overhead import OverheadReport, overhead_per_sample
from ..fusion.vote import vote_batch
from ..models.serialize import load_model, manifest_path
from ..nn.train import predict
from ..sigsynth.datafile import (
    GenerationConfig,
    StoredDataset,
    config_fingerprint,
    dataset_paths,
    generate_dataset,
    sidecar_path,
)
from .config import ExperimentConfig
from .evaluate import (
    AccuracyCurve,
    SnrGain,
    accuracy_by_snr,
    node_features,
    node_probs,
    scheme_predictions,
    snr_gain,
)
from .jobs import (
    _dataset_fingerprint,
    feature_source_fingerprint,
    load_pca,
    run_feature_extraction,
    run_pca_fit,
    run_pca_projection,
    run_training_job,
)
from .report import emit_report

logger = logging.getLogger(__name__)


@dataclass
class SuiteResult:
    suite: str
    curves: dict[str, AccuracyCurve]
    gains: list[SnrGain]
    overhead: OverheadReport | None
    summary: dict
    report_paths: dict[str, Path] = field(default_factory=dict)

    def curve(self, scheme: str, n_nodes: int) -> AccuracyCurve:
        return self.curves[f"{scheme}-n{n_nodes}"]


# ---------------------------------------------------------------- artifacts


def _dirs(config: ExperimentConfig) -> dict[str, Path]:
    root = Path(config.out_dir)
    return {
        "datasets": root / "datasets",
        "models": root / "models",
        "features": root / "features",
        "reports": root / "reports",
    }


def _gen_config(config: ExperimentConfig, n_nodes: int, role: str, delta: float = 0.0) -> GenerationConfig:
    if role == "train":
        return GenerationConfig(
            n_nodes=n_nodes,
            snr_grid_db=config.snr_grid_db,
            samples_per_cell=config.samples_per_cell,
            train_fraction=2.0 / 3.0,
            policy="spread" if (n_nodes > 1 and config.train_delta_db > 0) else "grid",
            delta_snr_db=config.train_delta_db if n_nodes > 1 else 0.0,
        )
    if role == "eval-grid":
        return GenerationConfig(
            n_nodes=n_nodes,
            snr_grid_db=config.snr_grid_db,
            samples_per_cell=config.eval_per_cell,
            train_fraction=0.0,
            policy="grid",
        )
    if role == "eval-spread":
        return GenerationConfig(
            n_nodes=n_nodes,
            snr_grid_db=config.snr_grid_db,
            samples_per_cell=config.eval_per_cell,
            train_fraction=0.0,
            policy="spread",
            delta_snr_db=delta,
        )
    raise ValueError(role)


def ensure_dataset(config: ExperimentConfig, name: str, gen: GenerationConfig) -> dict[str, Path]:
    """Generate <datasets>/<name>.{train,test}.csig unless already current."""
    prefix = _dirs(config)["datasets"] / name
    paths = dataset_paths(prefix)
    seed = config.derived_seed(f"dataset/{name}")
    sidecar = sidecar_path(paths["train"])
    if sidecar.exists():
        meta = json.loads(sidecar.read_text())
        if meta.get("fingerprint") == gen.fingerprint() and meta.get("seed") == seed:
            return paths
    logger.info("generating dataset %s (%d samples)", name, gen.sample_count)
    return generate_dataset(gen, prefix, seed=seed)


def _model_current(path: Path, fingerprint: str) -> bool:
    mpath = manifest_path(path)
    if not (path.exists() and mpath.exists()):
        return False
    return json.loads(mpath.read_text()).get("training_fingerprint") == fingerprint


def _job_fingerprint(config: ExperimentConfig, kind: str, hyper, source_fp: str, init_seed: int) -> str:
    return config_fingerprint(
        {"kind": kind, "hyper": hyper.to_json(), "source": source_fp, "init_seed": init_seed}
    )


def ensure_training_job(
    config: ExperimentConfig, kind: str, job_name: str, inputs: dict[str, Path], source_fp: str
) -> Path:
    out_model = _dirs(config)["models"] / f"{job_name}.csnn"
    hyper = config.hyper(job_name)
    fingerprint = _job_fingerprint(config, kind, hyper, source_fp, hyper.seed)
    if _model_current(out_model, fingerprint):
        return out_model
    if config.no_train:
        raise PrerequisiteMissing(f"model {job_name} not built and --no-train is set")
    run_training_job(kind, inputs, hyper, out_model)
    return out_model


def ensure_cnn1(config: ExperimentConfig, single_train: Path) -> Path:
    return ensure_training_job(
        config, "cnn1", "cnn1", {"dataset": single_train}, _dataset_fingerprint(single_train)
    )


def ensure_cnn2(config: ExperimentConfig, n: int, train_file: Path) -> Path:
    return ensure_training_job(
        config, "cnn2", f"cnn2_n{n}", {"dataset": train_file}, _dataset_fingerprint(train_file)
    )


def ensure_features(config: ExperimentConfig, n: int, cnn1_path: Path, train_file: Path) -> Path:
    out = _dirs(config)["features"] / f"feats_train_n{n}.csft"
    cnn1_fp = json.loads(manifest_path(cnn1_path).read_text()).get("training_fingerprint")
    stamp = {"model_fingerprint": cnn1_fp, "dataset": _dataset_fingerprint(train_file)}
    meta_file = out.with_name(out.stem + ".meta.json")
    if out.exists() and meta_file.exists():
        meta = json.loads(meta_file.read_text())
        if meta.get("stamp") == stamp:
            return out
    logger.info("extracting CNN1 features for n=%d", n)
    run_feature_extraction(cnn1_path, train_file, out)
    meta = json.loads(meta_file.read_text())
    meta["stamp"] = stamp
    meta_file.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return out


def ensure_cnn3(config: ExperimentConfig, n: int, feats: Path, cnn1_path: Path) -> Path:
    out_model = _dirs(config)["models"] / f"cnn3_n{n}.csnn"
    hyper = config.hyper(f"cnn3_n{n}")
    fingerprint = _job_fingerprint(
        config, "cnn3", hyper, feature_source_fingerprint(feats), hyper.seed
    )
    if _model_current(out_model, fingerprint):
        return out_model
    if config.no_train:
        raise PrerequisiteMissing(f"model cnn3_n{n} not built and --no-train is set")
    run_training_job("cnn3", {"features": feats, "cnn1": cnn1_path}, hyper, out_model)
    return out_model


def ensure_pca(config: ExperimentConfig, train_file: Path) -> Path:
    out = _dirs(config)["models"] / "pca.csnn"
    stamp_file = out.with_name("pca.meta.json")
    stamp = {"dataset": _dataset_fingerprint(train_file)}
    if out.exists() and stamp_file.exists():
        if json.loads(stamp_file.read_text()) == stamp:
            return out
    run_pca_fit(train_file, out)
    stamp_file.write_text(json.dumps(stamp, indent=2) + "\n")
    return out


def ensure_pca_features(config: ExperimentConfig, n: int, pca_path: Path, train_file: Path) -> Path:
    out = _dirs(config)["features"] / f"pca_feats_train_n{n}.csft"
    meta_file = out.with_name(out.stem + ".meta.json")
    stamp = {"dataset": _dataset_fingerprint(train_file), "pca": str(pca_path.name)}
    if out.exists() and meta_file.exists():
        if json.loads(meta_file.read_text()).get("stamp") == stamp:
            return out
    run_pca_projection(pca_path, train_file, out)
    meta = json.loads(meta_file.read_text())
    meta["stamp"] = stamp
    meta_file.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return out


def ensure_cnn3_pca(config: ExperimentConfig, n: int, feats: Path, pca_path: Path) -> Path:
    out_model = _dirs(config)["models"] / f"cnn3_pca_n{n}.csnn"
    hyper = config.hyper(f"cnn3_pca_n{n}")
    fingerprint = _job_fingerprint(
        config, "cnn3-pca", hyper, feature_source_fingerprint(feats), hyper.seed
    )
    if _model_current(out_model, fingerprint):
        return out_model
    if config.no_train:
        raise PrerequisiteMissing(f"model cnn3_pca_n{n} not built and --no-train is set")
    run_training_job("cnn3-pca", {"features": feats, "pca": pca_path}, hyper, out_model)
    return out_model


# ---------------------------------------------------------------- evaluation


def _gain_or_none(reference: AccuracyCurve, improved: AccuracyCurve, threshold=0.5) -> SnrGain:
    try:
        return snr_gain(reference, improved, threshold)
    except GainUndefined:
        return SnrGain(reference.curve_id, improved.curve_id, threshold, None)


def _load_summary(config: ExperimentConfig, suite: str) -> SuiteResult | None:
    path = _dirs(config)["reports"] / suite / "summary.json"
    if not path.exists():
        return None
    doc = json.loads(path.read_text())
    if doc.get("meta", {}).get("config_fingerprint") != config.fingerprint():
        return None
    curves = {c["scheme"] + f"-n{c['n_nodes']}": AccuracyCurve.from_json(c) for c in doc["curves"]}
    gains = [
        SnrGain(g["reference"], g["improved"], g["threshold"], g["gain_db"])
        for g in doc["gains"]
    ]
    return SuiteResult(
        suite=suite, curves=curves, gains=gains, overhead=None, summary=doc,
        report_paths={"json": path},
    )


def _emit(config, suite, curves, gains, overhead, extra) -> SuiteResult:
    meta = {
        "config_fingerprint": config.fingerprint(),
        "config": config.to_json(),
        "seed": config.seed,
        **extra,
    }
    out = _dirs(config)["reports"] / suite
    curve_list = list(curves.values())
    paths = emit_report(curve_list, gains, overhead, out, suite, meta=meta)
    summary = json.loads(paths["json"].read_text())
    return SuiteResult(
        suite=suite, curves=curves, gains=gains, overhead=overhead,
        summary=summary, report_paths=paths,
    )


def run_fig5(config: ExperimentConfig) -> SuiteResult:
    """Schemes x node counts with equal-SNR evaluation nodes."""
    cached = _load_summary(config, "fig5")
    if cached is not None:
        return cached
    multi = [n for n in sorted(config.nodes) if n > 1]

    single = ensure_dataset(config, "single", _gen_config(config, 1, "train"))
    cnn1 = ensure_cnn1(config, single["train"])
    bundle = ModelBundle(cnn1=load_model(cnn1))

    curves: dict[str, AccuracyCurve] = {}
    logger.info("fig5: evaluating single-node baseline")
    single_ds = StoredDataset(single["test"])
    probs = node_probs(bundle, single_ds.iq)
    single_curve = accuracy_by_snr("single", 1, single_ds, probs[:, 0].argmax(axis=1))
    curves[single_curve.curve_id] = single_curve

    for n in multi:
        train_n = ensure_dataset(config, f"train_n{n}", _gen_config(config, n, "train"))
        eval_n = ensure_dataset(config, f"eval_grid_n{n}", _gen_config(config, n, "eval-grid"))
        cnn2 = ensure_cnn2(config, n, train_n["train"])
        feats = ensure_features(config, n, cnn1, train_n["train"])
        cnn3 = ensure_cnn3(config, n, feats, cnn1)

        logger.info("fig5: evaluating n=%d", n)
        ds = StoredDataset(eval_n["test"])
        bundle_n = ModelBundle(
            cnn1=bundle.cnn1, cnn2=load_model(cnn2), cnn3=load_model(cnn3)
        )
        n_probs = node_probs(bundle_n, ds.iq)
        n_feats = node_features(bundle_n, ds.iq)
        decision = accuracy_by_snr("decision", n, ds, vote_batch(n_probs))
        signal_pred = scheme_predictions(FusionScheme.SIGNAL_STACK, ds.iq, bundle_n)
        signal = accuracy_by_snr("signal", n, ds, signal_pred)
        feature_pred = predict(
            bundle_n.cnn3.net, n_feats.astype(np.float32)
        ).argmax(axis=1)
        feature = accuracy_by_snr("feature", n, ds, feature_pred)
        for curve in (decision, signal, feature):
            curves[curve.curve_id] = curve

    gains = []
    for scheme in ("decision", "signal", "feature"):
        chain = [single_curve] + [curves[f"{scheme}-n{n}"] for n in multi]
        for ref, imp in zip(chain, chain[1:]):
            gains.append(_gain_or_none(ref, imp))

    overhead = overhead_per_sample(max(config.nodes))
    return _emit(config, "fig5", curves, gains, overhead, extra={"nodes": list(config.nodes)})


def run_fig6a(config: ExperimentConfig, n_nodes: int = 4) -> SuiteResult:
    """Feature fusion under per-node SNR spread (delta sweep)."""
    cached = _load_summary(config, "fig6a")
    if cached is not None:
        return cached

    single = ensure_dataset(config, "single", _gen_config(config, 1, "train"))
    cnn1 = ensure_cnn1(config, single["train"])
    train_n = ensure_dataset(config, f"train_n{n_nodes}", _gen_config(config, n_nodes, "train"))
    feats = ensure_features(config, n_nodes, cnn1, train_n["train"])
    cnn3 = ensure_cnn3(config, n_nodes, feats, cnn1)
    bundle = ModelBundle(cnn1=load_model(cnn1), cnn3=load_model(cnn3))

    curves: dict[str, AccuracyCurve] = {}
    band_mean: dict[str, float] = {}
    for delta in config.delta_snrs:
        name = f"eval_spread{int(delta)}_n{n_nodes}"
        eval_d = ensure_dataset(
            config, name, _gen_config(config, n_nodes, "eval-spread", delta=delta)
        )
        logger.info("fig6a: evaluating delta=%g", delta)
        ds = StoredDataset(eval_d["test"])
        feats_d = node_features(bundle, ds.iq)
        pred = predict(bundle.cnn3.net, feats_d.astype(np.float32)).argmax(axis=1)
        curve = accuracy_by_snr(f"feature@dsnr{int(delta)}", n_nodes, ds, pred)
        curves[curve.curve_id] = curve
        band = [
            a for s, a in zip(curve.snr_db, curve.accuracy) if -10.0 <= s <= 0.0
        ]
        band_mean[f"dsnr{int(delta)}"] = float(np.mean(band))

    return _emit(
        config, "fig6a", curves, gains=[], overhead=None,
        extra={"n_nodes": n_nodes, "mean_accuracy_base_-10..0": band_mean},
    )


def run_fig6b(config: ExperimentConfig, n_nodes: int = 4) -> SuiteResult:
    """CNN feature fusion vs the PCA baseline vs the single-node classifier."""
    cached = _load_summary(config, "fig6b")
    if cached is not None:
        return cached

    single = ensure_dataset(config, "single", _gen_config(config, 1, "train"))
    cnn1 = ensure_cnn1(config, single["train"])
    train_n = ensure_dataset(config, f"train_n{n_nodes}", _gen_config(config, n_nodes, "train"))
    eval_n = ensure_dataset(config, f"eval_grid_n{n_nodes}", _gen_config(config, n_nodes, "eval-grid"))
    feats = ensure_features(config, n_nodes, cnn1, train_n["train"])
    cnn3 = ensure_cnn3(config, n_nodes, feats, cnn1)
    pca_path = ensure_pca(config, train_n["train"])
    pca_feats = ensure_pca_features(config, n_nodes, pca_path, train_n["train"])
    cnn3_pca = ensure_cnn3_pca(config, n_nodes, pca_feats, pca_path)

    bundle = ModelBundle(
        cnn1=load_model(cnn1),
        cnn3=load_model(cnn3),
        cnn3_pca=load_model(cnn3_pca),
        pca=load_pca(pca_path),
    )

    curves: dict[str, AccuracyCurve] = {}
    logger.info("fig6b: evaluating single-node baseline")
    single_ds = StoredDataset(single["test"])
    single_pred = predict(bundle.cnn1.net, np.ascontiguousarray(single_ds.iq[:, 0])).argmax(axis=1)
    single_curve = accuracy_by_snr("single", 1, single_ds, single_pred)
    curves[single_curve.curve_id] = single_curve

    logger.info("fig6b: evaluating feature fusion and PCA baseline")
    ds = StoredDataset(eval_n["test"])
    feature_pred = scheme_predictions(FusionScheme.FEATURE_CNN, ds.iq, bundle)
    feature_curve = accuracy_by_snr("feature", n_nodes, ds, feature_pred)
    curves[feature_curve.curve_id] = feature_curve
    pca_pred = scheme_predictions(FusionScheme.FEATURE_PCA, ds.iq, bundle)
    pca_curve = accuracy_by_snr("pca", n_nodes, ds, pca_pred)
    curves[pca_curve.curve_id] = pca_curve

    def at_zero(curve):
        return curve.accuracy[curve.snr_db.index(0.0)]

    extra = {
        "n_nodes": n_nodes,
        "accuracy_at_0db": {
            "single": at_zero(single_curve),
            "feature": at_zero(feature_curve),
            "pca": at_zero(pca_curve),
        },
    }
    return _emit(config, "fig6b", curves, gains=[], overhead=None, extra=extra)


def run_suite(config: ExperimentConfig) -> SuiteResult:
    if config.suite == "fig5" or config.suite == "custom":
        return run_fig5(config)
    if config.suite == "fig6a":
        return run_fig6a(config)
    if config.suite == "fig6b":
        return run_fig6b(config)
    raise ValueError(f"unknown suite {config.suite!r}")


def run_all_suites(config: ExperimentConfig) -> dict[str, SuiteResult]:
    """fig5 + fig6a + fig6b over one shared artifact store."""
    results = {}
    for suite in ("fig5", "fig6a", "fig6b"):
        cfg = ExperimentConfig.from_json({**config.to_json(), "suite": suite})
        cfg.no_train = config.no_train
        results[suite] = run_suite(cfg)
    return results
