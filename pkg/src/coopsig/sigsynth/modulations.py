"""The 12 modulation types and their symbol maps.

Linear families (PSK, OQPSK, QAM, PAM) map symbol indices to
unit-average-energy constellation points. FSK carries tone indices; the
frequency trajectory is synthesized in :mod:`coopsig.sigsynth.waveform`.

Pinned conventions (see the constants below for the exact alphabets):

* PSK: binary-reflected Gray placement around the circle. Phase offset 0
  for BPSK/8PSK, pi/4 for QPSK, so BPSK is {+1, -1} and QPSK index 0 is
  (1+1j)/sqrt(2).
* Square QAM (16/64): odd levels +/-{1,3,(5,7)} per axis, Gray per axis,
  index split I-major (k = kI*side + kQ), normalized by sqrt(10) and
  sqrt(42).
* 32QAM: cross constellation, the 6x6 odd-level grid minus the four
  corners, enumerated row-major; normalized by sqrt(20).
* PAM: natural ascending index -> level 2k-(order-1), normalized by
  sqrt(5) (4PAM) and sqrt(21) (8PAM).
* FSK: order tones spaced 1/16 cycles/sample, centered on 0 (orthogonal
  over one 8-sample symbol at minimum coherent spacing).
"""

from __future__ import annotations

import enum

import numpy as np

from ..errors import InvalidSymbol

FSK_TONE_SPACING = 1.0 / 16.0  # cycles/sample


class Family(enum.Enum):
    PSK = "psk"
    OQPSK = "oqpsk"
    FSK = "fsk"
    QAM = "qam"
    PAM = "pam"


class ModulationType(enum.IntEnum):
    """Label space of the classifier; enum value is the class index."""

    BPSK = 0
    QPSK = 1
    PSK8 = 2
    OQPSK = 3
    FSK2 = 4
    FSK4 = 5
    FSK8 = 6
    QAM16 = 7
    QAM32 = 8
    QAM64 = 9
    PAM4 = 10
    PAM8 = 11

    @property
    def order(self) -> int:
        return _ORDER[self]

    @property
    def family(self) -> Family:
        return _FAMILY[self]

    @property
    def display_name(self) -> str:
        return _DISPLAY[self]

    @classmethod
    def from_name(cls, name: str) -> "ModulationType":
        return _BY_NAME[name.upper()]


_ORDER = {
    ModulationType.BPSK: 2,
    ModulationType.QPSK: 4,
    ModulationType.PSK8: 8,
    ModulationType.OQPSK: 4,
    ModulationType.FSK2: 2,
    ModulationType.FSK4: 4,
    ModulationType.FSK8: 8,
    ModulationType.QAM16: 16,
    ModulationType.QAM32: 32,
    ModulationType.QAM64: 64,
    ModulationType.PAM4: 4,
    ModulationType.PAM8: 8,
}

_FAMILY = {
    ModulationType.BPSK: Family.PSK,
    ModulationType.QPSK: Family.PSK,
    ModulationType.PSK8: Family.PSK,
    ModulationType.OQPSK: Family.OQPSK,
    ModulationType.FSK2: Family.FSK,
    ModulationType.FSK4: Family.FSK,
    ModulationType.FSK8: Family.FSK,
    ModulationType.QAM16: Family.QAM,
    ModulationType.QAM32: Family.QAM,
    ModulationType.QAM64: Family.QAM,
    ModulationType.PAM4: Family.PAM,
    ModulationType.PAM8: Family.PAM,
}

_DISPLAY = {
    ModulationType.BPSK: "BPSK",
    ModulationType.QPSK: "QPSK",
    ModulationType.PSK8: "8PSK",
    ModulationType.OQPSK: "OQPSK",
    ModulationType.FSK2: "2FSK",
    ModulationType.FSK4: "4FSK",
    ModulationType.FSK8: "8FSK",
    ModulationType.QAM16: "16QAM",
    ModulationType.QAM32: "32QAM",
    ModulationType.QAM64: "64QAM",
    ModulationType.PAM4: "4PAM",
    ModulationType.PAM8: "8PAM",
}

_BY_NAME = {name: mod for mod, name in _DISPLAY.items()}

ALL_MODULATIONS = tuple(ModulationType)
CLASS_COUNT = len(ALL_MODULATIONS)


def _gray(n: int) -> int:
    return n ^ (n >> 1)


def _gray_positions(order: int) -> np.ndarray:
    """pos[k] = circle/axis position whose Gray code is the data value k."""
    pos = np.empty(order, dtype=np.int64)
    for p in range(order):
        pos[_gray(p)] = p
    return pos


def _psk_points(order: int, phase0: float) -> np.ndarray:
    pos = _gray_positions(order)
    return np.exp(1j * (2.0 * np.pi * pos / order + phase0))


def _qam_square_points(order: int) -> np.ndarray:
    side = int(round(np.sqrt(order)))
    pos = _gray_positions(side)
    levels = 2.0 * pos - (side - 1)
    k = np.arange(order)
    pts = levels[k // side] + 1j * levels[k % side]
    return pts / np.sqrt(np.mean(np.abs(pts) ** 2))


def _qam_cross32_points() -> np.ndarray:
    levels = np.array([-5.0, -3.0, -1.0, 1.0, 3.0, 5.0])
    pts = [
        re + 1j * im
        for re in levels
        for im in levels
        if not (abs(re) == 5.0 and abs(im) == 5.0)
    ]
    pts = np.array(pts)
    return pts / np.sqrt(np.mean(np.abs(pts) ** 2))


def _pam_points(order: int) -> np.ndarray:
    levels = 2.0 * np.arange(order) - (order - 1)
    pts = levels.astype(np.complex128)
    return pts / np.sqrt(np.mean(np.abs(pts) ** 2))


CONSTELLATIONS: dict[ModulationType, np.ndarray] = {
    ModulationType.BPSK: _psk_points(2, 0.0),
    ModulationType.QPSK: _psk_points(4, np.pi / 4),
    ModulationType.PSK8: _psk_points(8, 0.0),
    ModulationType.OQPSK: _psk_points(4, np.pi / 4),
    ModulationType.QAM16: _qam_square_points(16),
    ModulationType.QAM32: _qam_cross32_points(),
    ModulationType.QAM64: _qam_square_points(64),
    ModulationType.PAM4: _pam_points(4),
    ModulationType.PAM8: _pam_points(8),
}


def fsk_tones(order: int) -> np.ndarray:
    """Tone frequencies in cycles/sample, centered on 0."""
    return (np.arange(order) - (order - 1) / 2.0) * FSK_TONE_SPACING


def map_symbols(modulation: ModulationType, indices) -> np.ndarray:
    """Map symbol indices to constellation points (or tone indices for FSK).

    Raises:
        InvalidSymbol: if any index is outside [0, order).
    """
    idx = np.asarray(indices)
    if idx.size and (idx.min() < 0 or idx.max() >= modulation.order):
        raise InvalidSymbol(
            f"symbol index out of range for {modulation.display_name} "
            f"(order {modulation.order})"
        )
    if modulation.family is Family.FSK:
        return idx.astype(np.int64)
    return CONSTELLATIONS[modulation][idx]
