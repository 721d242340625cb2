"""Dataset binary format ("CSIG") and stratified generation.

Layout (little-endian): magic "CSIG", u16 version=1, u16 reserved=0,
u32 n_nodes, u32 frame_length, u32 class_count, u64 sample_count; then per
sample: u32 label, n_nodes x f32 snr_db, then per node f32[L] I followed
by f32[L] Q. Each file ``X.csig`` has a sidecar ``X.meta.json`` holding
the full generation configuration, seed, and split identity.

Samples are laid out cell-ordered (modulation-major, then SNR, then
replicate), with global sample index k = cell * samples_per_cell + rep
keying the RNG stream; the first train_per_cell replicates of each cell go
to the train file and the rest to the test file, so the split is exact and
generation parallelizes without changing a byte.
"""

from __future__ import annotations

import hashlib
import json
import multiprocessing
import os
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

import numpy as np

from ..errors import DatasetCorrupt, IoError, UnsupportedFormat
from .channel import GridSnr, SnrPolicy, SpreadSnr
from .modulations import CLASS_COUNT, ModulationType
from .sampling import generate_cooperative_sample
from .waveform import FrameSpec

MAGIC = b"CSIG"
VERSION = 1
_HEADER = struct.Struct("<4sHHIIIQ")


def config_fingerprint(obj) -> str:
    """sha256 of the canonical JSON encoding."""
    blob = json.dumps(obj, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


@dataclass(frozen=True)
class GenerationConfig:
    """Everything that determines a dataset's bytes, except the seed."""

    n_nodes: int = 1
    snr_grid_db: tuple[float, ...] = tuple(range(-20, 21, 2))
    samples_per_cell: int = 1500
    train_fraction: float = 2.0 / 3.0
    policy: str = "grid"  # "grid" or "spread"
    delta_snr_db: float = 0.0
    modulations: tuple[str, ...] = tuple(m.display_name for m in ModulationType)
    frame: FrameSpec = field(default_factory=FrameSpec)
    gain_range: tuple[float, float] | None = None

    def __post_init__(self):
        if self.n_nodes < 1:
            raise ValueError("n_nodes must be >= 1")
        if self.policy not in ("grid", "spread"):
            raise ValueError(f"unknown policy {self.policy!r}")

    @property
    def modulation_types(self) -> list[ModulationType]:
        return [ModulationType.from_name(n) for n in self.modulations]

    @property
    def n_cells(self) -> int:
        return len(self.modulations) * len(self.snr_grid_db)

    @property
    def sample_count(self) -> int:
        return self.n_cells * self.samples_per_cell

    @property
    def train_per_cell(self) -> int:
        return round(self.samples_per_cell * self.train_fraction)

    @property
    def test_per_cell(self) -> int:
        return self.samples_per_cell - self.train_per_cell

    def policy_for(self, base_snr_db: float) -> SnrPolicy:
        if self.policy == "grid":
            return GridSnr(snr_db=base_snr_db)
        return SpreadSnr(base_snr_db=base_snr_db, delta_db=self.delta_snr_db)

    def cell_of(self, sample_index: int) -> tuple[ModulationType, float]:
        cell = sample_index // self.samples_per_cell
        mod = self.modulation_types[cell // len(self.snr_grid_db)]
        snr = self.snr_grid_db[cell % len(self.snr_grid_db)]
        return mod, snr

    def to_json(self) -> dict:
        return {
            "n_nodes": self.n_nodes,
            "snr_grid_db": list(self.snr_grid_db),
            "samples_per_cell": self.samples_per_cell,
            "train_fraction": self.train_fraction,
            "policy": self.policy,
            "delta_snr_db": self.delta_snr_db,
            "modulations": list(self.modulations),
            "frame": {
                "symbols_per_frame": self.frame.symbols_per_frame,
                "samples_per_symbol": self.frame.samples_per_symbol,
                "filter_span": self.frame.filter_span,
            },
            "gain_range": list(self.gain_range) if self.gain_range else None,
        }

    @classmethod
    def from_json(cls, d: dict) -> "GenerationConfig":
        frame = FrameSpec(**d.get("frame", {}))
        gain = d.get("gain_range")
        return cls(
            n_nodes=d.get("n_nodes", 1),
            snr_grid_db=tuple(d.get("snr_grid_db", range(-20, 21, 2))),
            samples_per_cell=d.get("samples_per_cell", 1500),
            train_fraction=d.get("train_fraction", 2.0 / 3.0),
            policy=d.get("policy", "grid"),
            delta_snr_db=d.get("delta_snr_db", 0.0),
            modulations=tuple(d.get("modulations", [m.display_name for m in ModulationType])),
            frame=frame,
            gain_range=tuple(gain) if gain else None,
        )

    def fingerprint(self) -> str:
        return config_fingerprint(self.to_json())


@dataclass(frozen=True)
class DatasetHeader:
    n_nodes: int
    frame_length: int
    class_count: int
    sample_count: int
    version: int = VERSION
    seed: int | None = None  # from the sidecar; not part of the binary layout

    def record_bytes(self) -> int:
        return 4 + 4 * self.n_nodes + 8 * self.n_nodes * self.frame_length


@dataclass
class StoredSample:
    """What the file persists per sample: label, per-node SNR, IQ payload."""

    label: int
    snr_db: np.ndarray  # (n_nodes,) float32
    iq: np.ndarray  # (n_nodes, 2, L) float32


def _record_dtype(n_nodes: int, frame_length: int) -> np.dtype:
    return np.dtype(
        [
            ("label", "<u4"),
            ("snr", "<f4", (n_nodes,)),
            ("iq", "<f4", (n_nodes, 2, frame_length)),
        ]
    )


def _sample_bytes(label: int, snrs: np.ndarray, iq: np.ndarray) -> bytes:
    return (
        struct.pack("<I", label)
        + np.ascontiguousarray(snrs, dtype="<f4").tobytes()
        + np.ascontiguousarray(iq, dtype="<f4").tobytes()
    )


def _build_sample_bytes(config: GenerationConfig, seed: int, index: int) -> bytes:
    mod, base_snr = config.cell_of(index)
    sample = generate_cooperative_sample(
        label=mod,
        n_nodes=config.n_nodes,
        policy=config.policy_for(base_snr),
        spec=config.frame,
        seed=seed,
        index=index,
        gain_range=config.gain_range,
    )
    return _sample_bytes(int(mod), sample.snr_array(), sample.iq_array())


_POOL_STATE: dict = {}


def _pool_init(config_json: dict, seed: int) -> None:
    _POOL_STATE["config"] = GenerationConfig.from_json(config_json)
    _POOL_STATE["seed"] = seed


def _pool_build(index: int) -> bytes:
    return _build_sample_bytes(_POOL_STATE["config"], _POOL_STATE["seed"], index)


def _write_header(fh, config: GenerationConfig, count: int) -> None:
    fh.write(
        _HEADER.pack(
            MAGIC, VERSION, 0, config.n_nodes, config.frame.frame_length, CLASS_COUNT, count
        )
    )


def _write_sidecar(path: Path, config: GenerationConfig, seed: int, split: str, count: int) -> None:
    meta = {
        "format": "CSIG",
        "version": VERSION,
        "config": config.to_json(),
        "seed": seed,
        "split": split,
        "sample_count": count,
        "per_cell": config.train_per_cell if split == "train" else config.test_per_cell,
        "layout": "modulation-major, then snr, then replicate",
        "fingerprint": config.fingerprint(),
    }
    sidecar_path(path).write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def sidecar_path(path) -> Path:
    p = Path(path)
    return p.with_name(p.stem + ".meta.json")


def dataset_paths(out_prefix) -> dict[str, Path]:
    prefix = Path(out_prefix)
    return {
        "train": prefix.with_name(prefix.name + ".train.csig"),
        "test": prefix.with_name(prefix.name + ".test.csig"),
    }


def generate_dataset(
    config: GenerationConfig,
    out_prefix,
    seed: int,
    workers: int | None = None,
) -> dict[str, Path]:
    """Write the train and test files plus sidecars; returns their paths.

    ``workers`` > 1 fans sample synthesis out over processes; the output is
    byte-identical because streams are index-derived and the writer appends
    in index order. Defaults to the COOPSIG_THREADS environment variable.
    """
    if workers is None:
        workers = int(os.environ.get("COOPSIG_THREADS", "1"))
    paths = dataset_paths(out_prefix)
    paths["train"].parent.mkdir(parents=True, exist_ok=True)

    train_q, test_q = config.train_per_cell, config.test_per_cell
    try:
        fh_train = open(paths["train"], "wb")
        fh_test = open(paths["test"], "wb")
    except OSError as exc:
        raise IoError(str(exc)) from exc

    with fh_train, fh_test:
        _write_header(fh_train, config, config.n_cells * train_q)
        _write_header(fh_test, config, config.n_cells * test_q)

        def consume(index: int, payload: bytes) -> None:
            rep = index % config.samples_per_cell
            (fh_train if rep < train_q else fh_test).write(payload)

        indices = range(config.sample_count)
        if workers > 1:
            with multiprocessing.Pool(
                workers, initializer=_pool_init, initargs=(config.to_json(), seed)
            ) as pool:
                for index, payload in zip(indices, pool.imap(_pool_build, indices, chunksize=64)):
                    consume(index, payload)
        else:
            for index in indices:
                consume(index, _build_sample_bytes(config, seed, index))

    _write_sidecar(paths["train"], config, seed, "train", config.n_cells * train_q)
    _write_sidecar(paths["test"], config, seed, "test", config.n_cells * test_q)
    return paths


def read_header(fh, path) -> DatasetHeader:
    raw = fh.read(_HEADER.size)
    if len(raw) < _HEADER.size:
        raise DatasetCorrupt(f"{path}: truncated header")
    magic, version, _reserved, n_nodes, frame_length, class_count, sample_count = _HEADER.unpack(raw)
    if magic != MAGIC:
        raise UnsupportedFormat(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise UnsupportedFormat(f"{path}: unsupported version {version}")
    seed = None
    meta = sidecar_path(path)
    if meta.exists():
        seed = json.loads(meta.read_text()).get("seed")
    return DatasetHeader(
        n_nodes=n_nodes,
        frame_length=frame_length,
        class_count=class_count,
        sample_count=sample_count,
        version=version,
        seed=seed,
    )


def read_dataset(path) -> tuple[DatasetHeader, Iterator[StoredSample]]:
    """Open a dataset file; returns the header and a lazy sample iterator."""
    path = Path(path)
    fh = open(path, "rb")
    try:
        header = read_header(fh, path)
    except Exception:
        fh.close()
        raise

    rec = _record_dtype(header.n_nodes, header.frame_length)

    def samples() -> Iterator[StoredSample]:
        with fh:
            for _ in range(header.sample_count):
                raw = fh.read(rec.itemsize)
                if len(raw) < rec.itemsize:
                    raise DatasetCorrupt(f"{path}: truncated sample payload")
                row = np.frombuffer(raw, dtype=rec)[0]
                yield StoredSample(
                    label=int(row["label"]),
                    snr_db=row["snr"].copy(),
                    iq=row["iq"].copy(),
                )

    return header, samples()


def load_dataset_arrays(path) -> tuple[DatasetHeader, np.ndarray, np.ndarray, np.ndarray]:
    """Bulk-load (header, labels (S,), snr (S,N), iq (S,N,2,L) float32)."""
    path = Path(path)
    with open(path, "rb") as fh:
        header = read_header(fh, path)
        rec = _record_dtype(header.n_nodes, header.frame_length)
        rows = np.fromfile(fh, dtype=rec)
    if len(rows) != header.sample_count:
        raise DatasetCorrupt(
            f"{path}: header promises {header.sample_count} samples, found {len(rows)}"
        )
    return header, rows["label"].astype(np.int64), rows["snr"], rows["iq"]


class StoredDataset:
    """A fully loaded dataset plus its sidecar-derived cell structure."""

    def __init__(self, path):
        self.path = Path(path)
        self.header, self.labels, self.snr, self.iq = load_dataset_arrays(path)
        meta_file = sidecar_path(path)
        if not meta_file.exists():
            raise IoError(f"missing sidecar {meta_file}")
        self.meta = json.loads(meta_file.read_text())
        self.config = GenerationConfig.from_json(self.meta["config"])
        per_cell = self.meta["per_cell"]
        grid = np.asarray(self.config.snr_grid_db, dtype=np.float64)
        cells = np.arange(self.header.sample_count) // per_cell
        self.base_snr_db = grid[cells % len(grid)]

    def __len__(self) -> int:
        return self.header.sample_count

    @property
    def snr_grid_db(self) -> np.ndarray:
        return np.asarray(self.config.snr_grid_db, dtype=np.float64)
