"""Deterministic RNG stream derivation.

Every random draw in the package comes from a ``numpy.random.Generator``
whose underlying ``SeedSequence`` is keyed by ``(seed, domain, *key)``.
Streams are therefore independent of generation order: sample k of a
dataset always sees the same bits whether samples are produced serially,
in parallel, or in isolation.
"""

from __future__ import annotations

import numpy as np

# Domain constants keep unrelated consumers of the same user seed from
# colliding on a stream.
DOMAIN_DATASET = 0
DOMAIN_INIT = 1
DOMAIN_SHUFFLE = 2
DOMAIN_DROPOUT = 3


def stream(seed: int, domain: int, *key: int) -> np.random.Generator:
    """Return the generator for (seed, domain, *key)."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(domain), *map(int, key)))
    return np.random.Generator(np.random.PCG64(ss))


def sample_stream(seed: int, index: int) -> np.random.Generator:
    """Generator owning every draw of dataset sample ``index``."""
    return stream(seed, DOMAIN_DATASET, index)
