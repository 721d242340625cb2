"""Cooperative sample generation.

One transmit realization is shared by all N nodes; each node sees its own
delay, phase, CFO, and noise. Every draw for sample ``index`` comes from
the stream keyed by (seed, index), in a fixed documented order (symbols,
rolloff, node SNRs, per-node channel params, per-node noise, optional
gains), so generation is bit-reproducible under any execution schedule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..rng import sample_stream
from .channel import IQFrame, NodeChannel, SnrPolicy, apply_channel
from .modulations import ModulationType
from .waveform import FrameSpec, TransmitRealization, synthesize_baseband

ROLLOFF_RANGE = (0.2, 0.7)
CFO_RANGE = (-0.1, 0.1)
MAX_SNR_SPREAD_DB = 20.0


@dataclass
class CooperativeSample:
    """N correlated receptions of one transmitted frame, plus the label."""

    label: ModulationType
    frames: list[IQFrame]
    channels: list[NodeChannel]
    shared: TransmitRealization

    @property
    def n_nodes(self) -> int:
        return len(self.frames)

    def iq_array(self) -> np.ndarray:
        """(n_nodes, 2, L) float32 tensor, I on channel 0 and Q on channel 1."""
        return np.stack([np.stack([f.i, f.q]) for f in self.frames])

    def snr_array(self) -> np.ndarray:
        return np.array([ch.snr_db for ch in self.channels], dtype=np.float32)

    def validate(self, spec: FrameSpec) -> None:
        if self.n_nodes < 1 or len(self.channels) != self.n_nodes:
            raise ValueError("frames and channels must align, with n_nodes >= 1")
        for frame, ch in zip(self.frames, self.channels):
            frame.validate(spec.frame_length)
            ch.validate(spec)
        snrs = [ch.snr_db for ch in self.channels if math.isfinite(ch.snr_db)]
        if snrs and max(snrs) - min(snrs) > MAX_SNR_SPREAD_DB + 1e-9:
            raise ValueError("pairwise SNR difference exceeds 20 dB")


def draw_transmit(
    modulation: ModulationType, spec: FrameSpec, rng: np.random.Generator
) -> TransmitRealization:
    indices = rng.integers(0, modulation.order, spec.tx_symbols)
    rolloff = rng.uniform(*ROLLOFF_RANGE)
    return TransmitRealization(modulation=modulation, symbol_indices=indices, rolloff=rolloff)


def draw_channel(spec: FrameSpec, snr_db: float, rng: np.random.Generator) -> NodeChannel:
    phase = rng.uniform(0.0, 2.0 * np.pi)
    cfo = rng.uniform(*CFO_RANGE)
    delay = int(rng.integers(0, spec.samples_per_symbol))
    return NodeChannel(phase=phase, cfo=cfo, delay=delay, snr_db=snr_db)


def generate_cooperative_sample(
    label: ModulationType,
    n_nodes: int,
    policy: SnrPolicy,
    spec: FrameSpec,
    seed: int,
    index: int,
    gain_range: tuple[float, float] | None = None,
) -> CooperativeSample:
    """Generate sample ``index`` of the dataset stream (seed, index)."""
    if n_nodes < 1:
        raise ValueError("n_nodes must be >= 1")
    rng = sample_stream(seed, index)

    tx = draw_transmit(label, spec, rng)
    snrs = policy.node_snrs(n_nodes, rng)
    channels = [draw_channel(spec, snr, rng) for snr in snrs]

    x = synthesize_baseband(tx, spec)
    frames = [apply_channel(x, ch, spec, rng) for ch in channels]
    if gain_range is not None:
        gains = rng.uniform(gain_range[0], gain_range[1], n_nodes)
        frames = [
            IQFrame(i=(f.i * np.float32(g)), q=(f.q * np.float32(g)))
            for f, g in zip(frames, gains)
        ]
    return CooperativeSample(label=label, frames=frames, channels=channels, shared=tx)
