"""Counter-based random-number substreams.

All stochastic pieces of the simulator (state synthesis, shot sampling) draw
from Philox (a 64-bit counter-based generator) keyed by

    key = (master_seed, rep << 32 | stream)

so that any (master seed, repetition, stream) triple names an independent
stream that can be opened in any order, by any worker, with identical output.
Stream ids:

    0            whole-register sampling (direct readout)
    1 .. m       grid point k of the encoding sweep (stream = k + 1)
    0xFFFFFFFF   state synthesis (random-state draws)
"""
from __future__ import annotations

import numpy as np

STREAM_REGISTER = 0
STREAM_GRID_BASE = 1
STREAM_STATE = 0xFFFFFFFF

_MASK32 = 0xFFFFFFFF
_MASK64 = 0xFFFFFFFFFFFFFFFF


def substream(master_seed: int, rep: int, stream: int) -> np.random.Generator:
    """Open the generator for (master seed, repetition, stream)."""
    if rep < 0 or stream < 0:
        raise ValueError("rep and stream ids must be nonnegative")
    if rep > _MASK32 or stream > _MASK32:
        raise ValueError("rep and stream ids must fit in 32 bits")
    key = np.array(
        [master_seed & _MASK64, ((rep & _MASK32) << 32) | (stream & _MASK32)],
        dtype=np.uint64,
    )
    return np.random.Generator(np.random.Philox(key=key))


def grid_stream(master_seed: int, rep: int, grid_index: int) -> np.random.Generator:
    """Generator used to sample shots at grid point ``grid_index`` (0-based)."""
    return substream(master_seed, rep, STREAM_GRID_BASE + grid_index)


def complex_normals(rng: np.random.Generator, size: int) -> np.ndarray:
    """Standard complex Gaussians via Box-Muller over uniform doubles.

    Built from ``rng.random()`` only, so the values depend on nothing but the
    Philox bit stream; platform-stable to the last few ulps.
    """
    u1 = 1.0 - rng.random(size)  # in (0, 1], keeps the log finite
    u2 = rng.random(size)
    return np.sqrt(-2.0 * np.log(u1)) * np.exp(2j * np.pi * u2)
