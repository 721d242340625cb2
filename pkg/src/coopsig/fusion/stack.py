"""Channel stacking for signal fusion: node i's I and Q occupy 2i, 2i+1."""

from __future__ import annotations

import numpy as np

from ..errors import ShapeError
from ..sigsynth.sampling import CooperativeSample


def stack_signals(sample) -> np.ndarray:
    """(1, 2N, L) tensor from a CooperativeSample or an (N, 2, L) array."""
    if isinstance(sample, CooperativeSample):
        lengths = {len(f.i) for f in sample.frames} | {len(f.q) for f in sample.frames}
        if len(lengths) != 1:
            raise ShapeError(f"frames disagree on length: {sorted(lengths)}")
        iq = sample.iq_array()
    else:
        iq = np.asarray(sample, dtype=np.float32)
        if iq.ndim != 3 or iq.shape[1] != 2:
            raise ShapeError(f"expected (N, 2, L), got {iq.shape}")
    n, _, length = iq.shape
    return iq.reshape(1, 2 * n, length)


def stack_signals_batch(iq: np.ndarray) -> np.ndarray:
    """(S, N, 2, L) -> (S, 2N, L), same interleaved layout."""
    if iq.ndim != 4 or iq.shape[2] != 2:
        raise ShapeError(f"expected (S, N, 2, L), got {iq.shape}")
    s, n, _, length = iq.shape
    return iq.reshape(s, 2 * n, length)
