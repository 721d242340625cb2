"""Per-node receive chain: delay, phase, CFO rotation, and AWGN.

Amplitude attenuation is absorbed into SNR: the cropped signal is
power-normalized and the noise variance set from snr_db, so classifiers
see only relative scale. ``snr_db = math.inf`` is the no-noise sentinel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import FrameUnderrun
from .waveform import FrameSpec

NO_NOISE = math.inf


@dataclass(frozen=True)
class NodeChannel:
    """One node's channel draw.

    phase in [0, 2*pi); cfo in [-0.1, 0.1] cycles/sample; delay an integer
    sample offset in [0, samples_per_symbol); snr_db on the configured grid
    (Spread policies may push it up to delta beyond the grid edges).
    """

    phase: float
    cfo: float
    delay: int
    snr_db: float

    def validate(self, spec: FrameSpec) -> None:
        if not 0.0 <= self.phase < 2.0 * np.pi:
            raise ValueError(f"phase {self.phase} outside [0, 2pi)")
        if abs(self.cfo) > 0.1:
            raise ValueError(f"cfo {self.cfo} outside [-0.1, 0.1]")
        if not 0 <= self.delay < spec.samples_per_symbol:
            raise ValueError(f"delay {self.delay} outside [0, {spec.samples_per_symbol})")


@dataclass(frozen=True)
class GridSnr:
    """All nodes at the same SNR."""

    snr_db: float

    def node_snrs(self, n_nodes: int, rng: np.random.Generator) -> np.ndarray:
        return np.full(n_nodes, self.snr_db, dtype=np.float64)


@dataclass(frozen=True)
class SpreadSnr:
    """Each node uniform in [base - delta, base + delta].

    delta_db <= 10 keeps the pairwise SNR difference within the 20 dB cap.
    """

    base_snr_db: float
    delta_db: float

    def __post_init__(self):
        if not 0.0 <= self.delta_db <= 10.0:
            raise ValueError(f"delta_db {self.delta_db} outside [0, 10]")

    def node_snrs(self, n_nodes: int, rng: np.random.Generator) -> np.ndarray:
        lo = self.base_snr_db - self.delta_db
        hi = self.base_snr_db + self.delta_db
        return rng.uniform(lo, hi, n_nodes)


SnrPolicy = GridSnr | SpreadSnr


@dataclass
class IQFrame:
    """One node's received frame as two real float32 sequences."""

    i: np.ndarray
    q: np.ndarray

    def __len__(self) -> int:
        return len(self.i)

    @property
    def complex(self) -> np.ndarray:
        return self.i.astype(np.float64) + 1j * self.q.astype(np.float64)

    def validate(self, frame_length: int) -> None:
        if len(self.i) != frame_length or len(self.q) != frame_length:
            raise ValueError("IQ rails must both have the frame length")
        if not (np.isfinite(self.i).all() and np.isfinite(self.q).all()):
            raise ValueError("IQ rails must be finite")


def apply_channel(
    x: np.ndarray,
    ch: NodeChannel,
    spec: FrameSpec,
    rng: np.random.Generator | None = None,
) -> IQFrame:
    """Crop at the node delay, power-normalize, rotate, and add AWGN.

    Raises:
        FrameUnderrun: if x is too short to crop frame_length samples at
            offset ch.delay.
    """
    L = spec.frame_length
    if ch.delay + L > len(x):
        raise FrameUnderrun(f"sequence length {len(x)} < delay {ch.delay} + {L}")
    seg = np.asarray(x, dtype=np.complex128)[ch.delay : ch.delay + L]
    seg = seg / np.sqrt(np.mean(np.abs(seg) ** 2))

    n = np.arange(L)
    y = seg * np.exp(1j * (2.0 * np.pi * ch.cfo * n + ch.phase))

    if math.isfinite(ch.snr_db):
        if rng is None:
            raise ValueError("rng required when noise is enabled")
        noise_power = 10.0 ** (-ch.snr_db / 10.0)
        w = rng.standard_normal((2, L)) * np.sqrt(noise_power / 2.0)
        y = y + w[0] + 1j * w[1]

    return IQFrame(i=y.real.astype(np.float32), q=y.imag.astype(np.float32))
