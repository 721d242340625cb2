"""Experiment configuration and the paper/desk scale profiles."""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field
from pathlib import Path

from ..nn.optim import Hyperparameters
from ..sigsynth.datafile import config_fingerprint

PAPER_GRID = tuple(float(s) for s in range(-20, 21, 2))
DESK_GRID = tuple(float(s) for s in range(-20, 21, 4))

SUITES = ("fig5", "fig6a", "fig6b", "custom")
PROFILES = ("paper", "desk", "custom")


@dataclass
class ExperimentConfig:
    suite: str = "fig5"
    profile: str = "desk"
    out_dir: Path = Path("artifacts")
    seed: int = 2024
    nodes: tuple[int, ...] = (1, 2, 4)
    snr_grid_db: tuple[float, ...] = DESK_GRID
    samples_per_cell: int = 300
    eval_per_cell: int = 100
    epochs: int = 15
    batch_size: int = 128
    delta_snrs: tuple[float, ...] = (0.0, 5.0, 10.0)
    train_delta_db: float = 10.0
    no_train: bool = False
    deterministic: bool = True

    def __post_init__(self):
        self.out_dir = Path(self.out_dir)
        if self.suite not in SUITES:
            raise ValueError(f"unknown suite {self.suite!r}")
        if self.profile not in PROFILES:
            raise ValueError(f"unknown profile {self.profile!r}")

    @classmethod
    def desk(cls, suite: str, out_dir, seed: int = 2024, **overrides) -> "ExperimentConfig":
        return cls(suite=suite, profile="desk", out_dir=Path(out_dir), seed=seed, **overrides)

    @classmethod
    def paper(cls, suite: str, out_dir, seed: int = 2024, **overrides) -> "ExperimentConfig":
        return cls(
            suite=suite,
            profile="paper",
            out_dir=Path(out_dir),
            seed=seed,
            snr_grid_db=PAPER_GRID,
            samples_per_cell=1500,
            eval_per_cell=500,
            epochs=40,
            **overrides,
        )

    def hyper(self, job_name: str) -> Hyperparameters:
        return Hyperparameters(
            learning_rate=0.01,
            halving_period=10,
            epochs=self.epochs,
            momentum=0.9,
            batch_size=self.batch_size,
            seed=self.derived_seed(f"train/{job_name}"),
        )

    def derived_seed(self, name: str) -> int:
        """Stable per-artifact seed: master seed plus a name hash."""
        return (self.seed + zlib.crc32(name.encode())) % (2**63)

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "profile": self.profile,
            "out_dir": str(self.out_dir),
            "seed": self.seed,
            "nodes": list(self.nodes),
            "snr_grid_db": list(self.snr_grid_db),
            "samples_per_cell": self.samples_per_cell,
            "eval_per_cell": self.eval_per_cell,
            "epochs": self.epochs,
            "batch_size": self.batch_size,
            "delta_snrs": list(self.delta_snrs),
            "train_delta_db": self.train_delta_db,
        }

    @classmethod
    def from_json(cls, d: dict) -> "ExperimentConfig":
        kwargs = dict(d)
        for key in ("nodes", "snr_grid_db", "delta_snrs"):
            if key in kwargs:
                kwargs[key] = tuple(kwargs[key])
        kwargs.pop("no_train", None)
        kwargs.pop("deterministic", None)
        return cls(**kwargs)

    def fingerprint(self) -> str:
        return config_fingerprint(self.to_json())
