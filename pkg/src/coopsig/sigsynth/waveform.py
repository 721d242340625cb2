"""Baseband frame synthesis.

A frame is 64 symbols at 8 samples/symbol (512 samples). Linear families
are upsampled and shaped with a truncated raised-cosine pulse; OQPSK
additionally delays the quadrature rail by half a symbol; FSK is
continuous-phase with a constant unit envelope. The synthesizer returns a
pre-crop sequence one symbol longer than the frame so the channel can
apply an integer delay below one symbol.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import FrameUnderrun
from .modulations import Family, ModulationType, fsk_tones, map_symbols


@dataclass(frozen=True)
class FrameSpec:
    """Frame geometry. frame_length = symbols_per_frame * samples_per_symbol."""

    symbols_per_frame: int = 64
    samples_per_symbol: int = 8
    filter_span: int = 8  # total pulse support, in symbols

    def __post_init__(self):
        if self.symbols_per_frame < 1 or self.samples_per_symbol < 1:
            raise ValueError("frame geometry must be positive")
        if self.filter_span < 2 or self.filter_span % 2:
            raise ValueError("filter_span must be even and >= 2")

    @property
    def frame_length(self) -> int:
        return self.symbols_per_frame * self.samples_per_symbol

    @property
    def tx_symbols(self) -> int:
        """Symbols drawn per realization: frame + span + two of margin/slack."""
        return self.symbols_per_frame + self.filter_span + 2


@dataclass(frozen=True)
class TransmitRealization:
    """One transmitted frame shared by all receiving nodes."""

    modulation: ModulationType
    symbol_indices: np.ndarray
    rolloff: float

    def __post_init__(self):
        if not 0.2 <= self.rolloff <= 0.7:
            raise ValueError(f"rolloff {self.rolloff} outside [0.2, 0.7]")

    def validate(self, spec: FrameSpec) -> None:
        if len(self.symbol_indices) < spec.symbols_per_frame + spec.filter_span:
            raise FrameUnderrun(
                f"{len(self.symbol_indices)} symbols < frame + filter span"
            )


def raised_cosine_taps(sps: int, span_symbols: int, rolloff: float) -> np.ndarray:
    """Peak-normalized raised-cosine taps over +/- span/2 symbols."""
    half = span_symbols // 2
    t = np.arange(-half * sps, half * sps + 1) / sps
    with np.errstate(divide="ignore", invalid="ignore"):
        taps = np.sinc(t) * np.cos(np.pi * rolloff * t) / (1.0 - (2.0 * rolloff * t) ** 2)
    taps[np.abs(t) < 1e-12] = 1.0
    singular = np.abs(np.abs(2.0 * rolloff * t) - 1.0) < 1e-9
    if singular.any():
        taps[singular] = (np.pi / 4.0) * np.sinc(1.0 / (2.0 * rolloff))
    return taps


def _shaped_linear(points: np.ndarray, spec: FrameSpec, rolloff: float) -> np.ndarray:
    """Upsample, pulse-shape, and trim to the transient-free region."""
    sps = spec.samples_per_symbol
    half = spec.filter_span // 2
    taps = raised_cosine_taps(sps, spec.filter_span, rolloff)
    taps = taps / taps.sum()  # unit DC gain; scale cancels in normalization
    train = np.zeros(len(points) * sps, dtype=np.complex128)
    train[::sps] = points
    full = np.convolve(train, taps)
    # ideal-timeline sample m sits at full[m + group_delay]; samples with the
    # pulse support fully inside the train are transient-free
    gd = half * sps
    return full[2 * gd : len(train)]


def _cpfsk(tone_idx: np.ndarray, order: int, sps: int) -> np.ndarray:
    tones = fsk_tones(order)
    f = np.repeat(tones[tone_idx], sps)
    phase = 2.0 * np.pi * np.concatenate(([0.0], np.cumsum(f[:-1])))
    return np.exp(1j * phase)


def synthesize_baseband(tx: TransmitRealization, spec: FrameSpec) -> np.ndarray:
    """Synthesize the pre-crop complex sequence (length frame_length + sps).

    Power is normalized to 1 over the transient-free interior before the
    output window is cut, so OQPSK's two rails share one scale.
    """
    tx.validate(spec)
    sps = spec.samples_per_symbol
    half = spec.filter_span // 2
    out_len = spec.frame_length + sps
    family = tx.modulation.family

    if family is Family.FSK:
        tone_idx = map_symbols(tx.modulation, tx.symbol_indices)
        valid = _cpfsk(tone_idx, tx.modulation.order, sps)
        preferred_lead = (half + 1) * sps  # align frames with linear families
    else:
        points = map_symbols(tx.modulation, tx.symbol_indices)
        valid = _shaped_linear(points, spec, tx.rolloff)
        preferred_lead = sps  # valid region already starts half a span in

    slack = len(valid) - out_len
    min_lead = sps // 2 if family is Family.OQPSK else 0  # room for the Q delay
    if slack < min_lead:
        raise FrameUnderrun("not enough symbols to cover frame, span, and slack")
    lead = max(min(preferred_lead, slack), min_lead)

    valid = valid / np.sqrt(np.mean(np.abs(valid) ** 2))
    if family is Family.OQPSK:
        q_lead = lead - sps // 2
        return valid[lead : lead + out_len].real + 1j * valid[q_lead : q_lead + out_len].imag
    return valid[lead : lead + out_len]
