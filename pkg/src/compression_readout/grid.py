"""Sampling grid and the ideal ancilla response A(x).

The encoding sweep samples the angles x_k = k*pi/(2m+1), k = 1..m with
m = 2^n - 1.  At angle x the ancilla reads |0> with probability

    A(x) = sum_i w_i cos^2(i x) = 1/2 + 1/2 sum_i w_i cos(2 i x),

a cosine series whose coefficients are the populations w_i.  Everything here
is pure and exact; noise enters elsewhere.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .states import AmplitudeState, SparsePopulations, dense_populations

# Exact products i*k stay below 2^53 for any dense-capped n, so float angle
# reduction is only ever needed for big sparse indices.
_EXACT_INT = 1 << 53


@dataclass(frozen=True)
class GridSpec:
    n: int
    m: int
    xs: np.ndarray  # x_k = k*pi/(2m+1), k = 1..m, strictly increasing, < pi/2

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=float)
        xs.flags.writeable = False
        object.__setattr__(self, "xs", xs)

    @property
    def length(self) -> int:
        """Period 2m+1 of the underlying discrete transform."""
        return 2 * self.m + 1


def build_grid(n: int) -> GridSpec:
    if n < 1:
        raise ValueError("qubit count must be >= 1")
    m = (1 << n) - 1
    ks = np.arange(1, m + 1)
    return GridSpec(n=n, m=m, xs=ks * (np.pi / (2 * m + 1)))


def _cos2_big_index(i: int, x: float) -> float:
    """cos^2(i*x) for indices too large for exact float products.

    The product i*x is reduced with enough working precision to keep the full
    integer part of the angle; costs microseconds for thousand-bit indices.
    """
    import mpmath

    with mpmath.workprec(i.bit_length() + 60):
        return float(mpmath.cos(mpmath.mpf(i) * mpmath.mpf(x)) ** 2)


def ideal_ancilla_probability(state, x: float) -> float:
    """A(x) for dense or sparse populations; O(|support|) on sparse input."""
    if isinstance(state, SparsePopulations):
        total = 0.0
        for i, w in state.entries.items():
            if i < _EXACT_INT:
                total += w * math.cos(i * x) ** 2
            else:
                total += w * _cos2_big_index(i, x)
        return total
    w = dense_populations(state)
    idx = np.arange(w.size)
    return float(w @ np.cos(idx * x) ** 2)


def ancilla_profile(state, grid: GridSpec) -> np.ndarray:
    """A(x_k) at every grid point.

    Dense populations: one length-(2m+1) real FFT, O(m log m).  Sparse:
    direct summation with exact integer angle reduction, O(|support| * m).
    """
    if isinstance(state, SparsePopulations):
        if grid.n != state.n:
            raise ValueError("grid and state disagree on qubit count")
        L = grid.length
        ks = np.arange(1, grid.m + 1, dtype=np.int64)
        out = np.zeros(grid.m)
        for i, w in state.entries.items():
            # cos^2 has period pi in the angle i*k*pi/L, so reduce i*k mod L.
            if i * grid.m < _EXACT_INT:
                t = (i * ks) % L
            else:
                t = (int(i) * ks.astype(object)) % L
                t = t.astype(np.int64)
            out += w * np.cos(t * (np.pi / L)) ** 2
        return out
    w = dense_populations(state)
    if isinstance(state, AmplitudeState) and grid.n != state.n:
        raise ValueError("grid and state disagree on qubit count")
    if w.size != grid.m + 1:
        raise ValueError("grid and population vector disagree on dimension")
    padded = np.zeros(grid.length)
    padded[: w.size] = w
    # A(x_k) = 1/2 + 1/2 Re DFT(w)[k]; indices 1..m of an rfft of length 2m+1.
    return 0.5 + 0.5 * np.fft.rfft(padded).real[1:]
