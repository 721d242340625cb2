"""Symbol-map contracts: pinned points, normalization, and errors."""

import numpy as np
import pytest

from coopsig.sigsynth import (
    ALL_MODULATIONS,
    CONSTELLATIONS,
    Family,
    ModulationType,
    fsk_tones,
    map_symbols,
)
from coopsig.errors import InvalidSymbol


def test_bpsk_is_antipodal_unit_pair():
    pts = map_symbols(ModulationType.BPSK, [0, 1])
    np.testing.assert_allclose(pts, [1 + 0j, -1 + 0j], atol=1e-15)


def test_qpsk_index_zero_is_first_quadrant_diagonal():
    pt = map_symbols(ModulationType.QPSK, [0])[0]
    np.testing.assert_allclose(pt, (1 + 1j) / np.sqrt(2), atol=1e-15)


def test_16qam_energy_and_corner():
    # oracle: direct summation over the +/-{1,3} grid normalized by sqrt(10)
    pts = map_symbols(ModulationType.QAM16, np.arange(16))
    assert abs(np.mean(np.abs(pts) ** 2) - 1.0) < 1e-12
    corner = np.max(np.abs(pts))
    np.testing.assert_allclose(corner, 3 * np.sqrt(2) / np.sqrt(10), atol=1e-12)
    assert abs(corner - 1.34164) < 1e-5


def test_8pam_top_index_maps_to_top_level():
    # levels +/-{1,3,5,7}, average energy 21
    pt = map_symbols(ModulationType.PAM8, [7])[0]
    np.testing.assert_allclose(pt, 7 / np.sqrt(21), atol=1e-12)


@pytest.mark.parametrize("mod", [m for m in ALL_MODULATIONS if m.family is not Family.FSK])
def test_every_linear_alphabet_has_unit_average_energy(mod):
    pts = CONSTELLATIONS[mod]
    assert len(pts) == mod.order or mod.family is Family.OQPSK
    assert abs(np.mean(np.abs(pts) ** 2) - 1.0) < 1e-12


@pytest.mark.parametrize("mod", ALL_MODULATIONS)
def test_alphabet_points_are_distinct(mod):
    pts = map_symbols(mod, np.arange(mod.order))
    assert len(np.unique(np.round(np.asarray(pts, dtype=np.complex128), 12))) == mod.order


def test_out_of_range_index_raises():
    with pytest.raises(InvalidSymbol):
        map_symbols(ModulationType.QPSK, [4])
    with pytest.raises(InvalidSymbol):
        map_symbols(ModulationType.BPSK, [-1])


def test_fsk_returns_tone_indices_and_tones_are_centered():
    idx = map_symbols(ModulationType.FSK4, [0, 3, 1])
    np.testing.assert_array_equal(idx, [0, 3, 1])
    for order in (2, 4, 8):
        tones = fsk_tones(order)
        assert abs(tones.mean()) < 1e-15
        np.testing.assert_allclose(np.diff(tones), 1.0 / 16.0)


def test_enum_orders_and_label_indices():
    assert [int(m) for m in ALL_MODULATIONS] == list(range(12))
    assert ModulationType.from_name("8psk") is ModulationType.PSK8
    assert ModulationType.QAM32.order == 32
    assert ModulationType.OQPSK.family is Family.OQPSK
