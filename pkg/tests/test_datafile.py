"""Dataset file format: split arithmetic, roundtrips, corruption, determinism."""

import json
import struct

import numpy as np
import pytest

from coopsig.errors import DatasetCorrupt, UnsupportedFormat
from coopsig.sigsynth import (
    GenerationConfig,
    StoredDataset,
    dataset_paths,
    generate_dataset,
    load_dataset_arrays,
    read_dataset,
    sidecar_path,
)

TINY = GenerationConfig(
    n_nodes=2,
    snr_grid_db=(-4.0, 0.0, 4.0),
    samples_per_cell=3,
    policy="spread",
    delta_snr_db=5.0,
)


def test_paper_profile_arithmetic():
    cfg = GenerationConfig()  # paper defaults: 1500/cell, 21 SNRs, 12 mods
    assert cfg.sample_count == 378_000
    assert cfg.n_cells * cfg.train_per_cell == 252_000
    assert cfg.n_cells * cfg.test_per_cell == 126_000


def test_desk_profile_arithmetic():
    cfg = GenerationConfig(snr_grid_db=tuple(range(-20, 21, 4)), samples_per_cell=300)
    assert cfg.sample_count == 39_600
    assert cfg.n_cells * cfg.train_per_cell == 26_400


def test_generate_and_roundtrip(tmp_path):
    paths = generate_dataset(TINY, tmp_path / "tiny", seed=5)
    header, it = read_dataset(paths["train"])
    assert header.n_nodes == 2
    assert header.frame_length == 512
    assert header.class_count == 12
    assert header.sample_count == TINY.n_cells * TINY.train_per_cell
    assert header.seed == 5
    samples = list(it)
    assert len(samples) == header.sample_count
    hdr2, labels, snr, iq = load_dataset_arrays(paths["train"])
    assert iq.dtype == np.float32 and iq.shape == (header.sample_count, 2, 2, 512)
    for k, s in enumerate(samples):
        assert s.label == labels[k]
        np.testing.assert_array_equal(s.snr_db, snr[k])
        np.testing.assert_array_equal(s.iq, iq[k])


def test_split_is_exact_per_cell(tmp_path):
    paths = generate_dataset(TINY, tmp_path / "tiny", seed=5)
    train = StoredDataset(paths["train"])
    test = StoredDataset(paths["test"])
    for snr in TINY.snr_grid_db:
        for mod in TINY.modulation_types:
            in_train = np.sum((train.labels == int(mod)) & (train.base_snr_db == snr))
            in_test = np.sum((test.labels == int(mod)) & (test.base_snr_db == snr))
            assert in_train == TINY.train_per_cell
            assert in_test == TINY.test_per_cell


def test_regeneration_is_byte_identical(tmp_path):
    p1 = generate_dataset(TINY, tmp_path / "a", seed=11)
    p2 = generate_dataset(TINY, tmp_path / "b", seed=11)
    assert p1["train"].read_bytes() == p2["train"].read_bytes()
    assert p1["test"].read_bytes() == p2["test"].read_bytes()
    p3 = generate_dataset(TINY, tmp_path / "c", seed=12)
    assert p1["train"].read_bytes() != p3["train"].read_bytes()


def test_parallel_generation_matches_serial(tmp_path):
    serial = generate_dataset(TINY, tmp_path / "s", seed=3, workers=1)
    parallel = generate_dataset(TINY, tmp_path / "p", seed=3, workers=2)
    assert serial["train"].read_bytes() == parallel["train"].read_bytes()
    assert serial["test"].read_bytes() == parallel["test"].read_bytes()


def test_bad_magic_and_version(tmp_path):
    paths = generate_dataset(TINY, tmp_path / "x", seed=1)
    raw = bytearray(paths["train"].read_bytes())
    raw[:4] = b"NOPE"
    bad = tmp_path / "bad.csig"
    bad.write_bytes(raw)
    with pytest.raises(UnsupportedFormat):
        read_dataset(bad)
    raw = bytearray(paths["train"].read_bytes())
    raw[4:6] = struct.pack("<H", 9)
    bad.write_bytes(raw)
    with pytest.raises(UnsupportedFormat):
        read_dataset(bad)


def test_truncated_payload_raises_corrupt(tmp_path):
    paths = generate_dataset(TINY, tmp_path / "x", seed=1)
    raw = paths["train"].read_bytes()
    trunc = tmp_path / "trunc.csig"
    trunc.write_bytes(raw[: len(raw) - 100])
    _, it = read_dataset(trunc)
    with pytest.raises(DatasetCorrupt):
        list(it)
    with pytest.raises(DatasetCorrupt):
        load_dataset_arrays(trunc)


def test_header_only_file_yields_empty_iterator(tmp_path):
    cfg = GenerationConfig(
        n_nodes=1, snr_grid_db=(0.0,), samples_per_cell=1, train_fraction=0.0
    )
    paths = generate_dataset(cfg, tmp_path / "empty", seed=0)
    header, it = read_dataset(paths["train"])
    assert header.sample_count == 0
    assert list(it) == []


def test_sidecar_records_config_and_seed(tmp_path):
    paths = generate_dataset(TINY, tmp_path / "m", seed=21)
    meta = json.loads(sidecar_path(paths["test"]).read_text())
    assert meta["seed"] == 21
    assert meta["split"] == "test"
    assert meta["config"]["n_nodes"] == 2
    assert meta["fingerprint"] == TINY.fingerprint()
    round_cfg = GenerationConfig.from_json(meta["config"])
    assert round_cfg == TINY


def test_dataset_paths_naming(tmp_path):
    paths = dataset_paths(tmp_path / "foo")
    assert paths["train"].name == "foo.train.csig"
    assert sidecar_path(paths["train"]).name == "foo.train.meta.json"


def test_stored_dataset_cell_mapping(tmp_path):
    paths = generate_dataset(TINY, tmp_path / "t", seed=5)
    ds = StoredDataset(paths["test"])
    # modulation-major layout: first test_per_cell samples belong to snr[0]
    assert ds.base_snr_db[0] == TINY.snr_grid_db[0]
    assert (ds.base_snr_db[: TINY.test_per_cell] == TINY.snr_grid_db[0]).all()
    # grid policy absent here (spread): per-node snr within base +/- delta
    spread_ok = np.abs(ds.snr - ds.base_snr_db[:, None]) <= TINY.delta_snr_db + 1e-6
    assert spread_ok.all()
