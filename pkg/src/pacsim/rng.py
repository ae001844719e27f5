"""Seed derivation and the raw uniform stream used by the simulator.

All randomness in pacsim descends from a single 64-bit master seed.
Per-replicate (and per-purpose) streams are derived with a splitmix64-style
mix, so that an ensemble is reproducible regardless of scheduling:

    stream_seed = mix64(master + (stream_id + 1) * GOLDEN)

The forward simulator consumes a raw splitmix64 sequence started from the
derived seed (see _kernels.py for the jitted twin of `smix_next`).  Vectorised
samplers (the dual-tree Monte Carlo) wrap the derived seed in numpy's PCG64.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

# 2**-53, multiplier turning the top 53 bits of a u64 into a float in [0, 1)
U53_INV = 1.0 / 9007199254740992.0


def mix64(x: int) -> int:
    """splitmix64 output function: a fixed-point avalanche of a 64-bit word."""
    x &= MASK64
    x = ((x ^ (x >> 30)) * _MIX1) & MASK64
    x = ((x ^ (x >> 27)) * _MIX2) & MASK64
    return x ^ (x >> 31)


def derive_stream_seed(master_seed: int, stream_id: int) -> int:
    """Derive the seed of an independent substream from (master, id).

    Used for replicate streams (id = replicate index) and, nested, for
    per-purpose substreams within a replicate.
    """
    return mix64((master_seed + (stream_id + 1) * GOLDEN) & MASK64)


def smix_next(state: int) -> tuple[int, int]:
    """Advance a splitmix64 state, returning (new_state, 64-bit output)."""
    state = (state + GOLDEN) & MASK64
    return state, mix64(state)


def smix_uniform(state: int) -> tuple[int, float]:
    """One double-precision uniform in [0, 1) from a splitmix64 state."""
    state, z = smix_next(state)
    return state, (z >> 11) * U53_INV


def generator(master_seed: int, stream_id: int) -> np.random.Generator:
    """numpy Generator on the derived substream (for vectorised sampling)."""
    return np.random.Generator(np.random.PCG64(derive_stream_seed(master_seed, stream_id)))
