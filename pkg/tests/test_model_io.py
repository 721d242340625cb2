"""Model serialization: bitwise roundtrips and forced corruption."""

import json

import numpy as np
import pytest

from coopsig.errors import ModelCorrupt, NoFeatureLayer, UnsupportedFormat
from coopsig.models import (
    build_cnn1,
    build_cnn3,
    extract_features,
    load_model,
    manifest_path,
    new_model,
    save_model,
)


@pytest.fixture(scope="module")
def saved(tmp_path_factory):
    path = tmp_path_factory.mktemp("models") / "cnn1.csnn"
    model = new_model(build_cnn1(), seed=11)
    save_model(model, path, fingerprint="test-fp")
    return model, path


def test_roundtrip_predictions_are_bitwise_identical(saved):
    model, path = saved
    loaded = load_model(path)
    rng = np.random.default_rng(0)
    x = rng.standard_normal((100, 2, 512)).astype(np.float32)
    np.testing.assert_array_equal(
        model.net.predict_probs(x), loaded.net.predict_probs(x)
    )
    assert loaded.fingerprint == "test-fp"
    assert loaded.spec.feature_layer_index == model.spec.feature_layer_index


def test_roundtrip_features_identical(saved):
    model, path = saved
    loaded = load_model(path)
    x = np.random.default_rng(1).standard_normal((5, 2, 512)).astype(np.float32)
    np.testing.assert_array_equal(extract_features(model, x), extract_features(loaded, x))


def test_manifest_with_wrong_dims_raises(saved, tmp_path):
    _, path = saved
    target = tmp_path / "bad.csnn"
    target.write_bytes(path.read_bytes())
    manifest = json.loads(manifest_path(path).read_text())
    name = next(iter(manifest["tensors"]))
    manifest["tensors"][name] = [1, 2, 3]
    manifest_path(target).write_text(json.dumps(manifest))
    with pytest.raises(ModelCorrupt):
        load_model(target)


def test_truncated_payload_raises(saved, tmp_path):
    _, path = saved
    target = tmp_path / "trunc.csnn"
    raw = path.read_bytes()
    target.write_bytes(raw[: len(raw) - 64])
    manifest_path(target).write_text(manifest_path(path).read_text())
    with pytest.raises(ModelCorrupt):
        load_model(target)


def test_missing_tensor_raises(saved, tmp_path):
    _, path = saved
    manifest = json.loads(manifest_path(path).read_text())
    manifest["tensors"]["L0.phantom"] = [4]
    target = tmp_path / "missing.csnn"
    target.write_bytes(path.read_bytes())
    manifest_path(target).write_text(json.dumps(manifest))
    with pytest.raises(ModelCorrupt):
        load_model(target)


def test_bad_magic_raises(saved, tmp_path):
    _, path = saved
    raw = bytearray(path.read_bytes())
    raw[:4] = b"XXXX"
    target = tmp_path / "magic.csnn"
    target.write_bytes(raw)
    manifest_path(target).write_text(manifest_path(path).read_text())
    with pytest.raises(UnsupportedFormat):
        load_model(target)


def test_missing_manifest_raises(saved, tmp_path):
    _, path = saved
    target = tmp_path / "nomanifest.csnn"
    target.write_bytes(path.read_bytes())
    with pytest.raises(ModelCorrupt):
        load_model(target)


class TestFeatureExtraction:
    def test_feature_vector_is_32_nonnegative_values(self, saved):
        model, _ = saved
        x = np.random.default_rng(2).standard_normal((2, 512)).astype(np.float32)
        feats = extract_features(model, x)
        assert feats.shape == (32,)
        assert (feats >= 0).all()

    def test_extraction_is_deterministic(self, saved):
        model, _ = saved
        x = np.random.default_rng(3).standard_normal((2, 512)).astype(np.float32)
        np.testing.assert_array_equal(extract_features(model, x), extract_features(model, x))

    def test_models_without_feature_layer_raise(self):
        cnn3 = new_model(build_cnn3(2), seed=0)
        with pytest.raises(NoFeatureLayer):
            extract_features(cnn3, np.zeros((2, 32), dtype=np.float32))
