"""Population recovery from ancilla probabilities.

Given estimates v_k of A(x_k) on the m-point grid (L = 2m+1), the inverse
rule is

    p_0     = (1 - 2m + 4 * sum_k v_k) / L
    p_(i>0) = 4 * (1 + 2 * sum_k v_k cos(2 i x_k)) / L.

Two implementations: an O(m^2) double loop kept as the permanent reference,
and an O(m log m) path that reads all the cosine sums off one odd-length real
FFT (pocketfft handles the prime factors of L via Bluestein's algorithm).

The rule has a built-in identity: because sum_k cos(2 i x_k) = -1/2 whenever
L does not divide i (see :func:`cosine_grid_sum`), the outputs sum to exactly 1 for ANY
input vector, physical or not.  Outputs are intentionally left raw: no
clipping, no renormalization (a separate opt-in post-processor exists).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import GridSpec, build_grid
from .states import SparsePopulations, dense_populations


@dataclass(frozen=True)
class AncillaEstimates:
    """Measured or exact |0>-probabilities at every grid point."""

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.m,):
            raise ValueError(f"expected {self.grid.m} values, got shape {v.shape}")
        if np.any(v < 0) or np.any(v > 1):
            raise ValueError("ancilla probabilities must lie in [0, 1]")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class DecodedPopulations:
    """Raw decoder output; entries may be negative but always sum to 1."""

    n: int
    values: np.ndarray
    source: str = "exact"  # "exact" | "sampled"
    shots_per_grid: int | None = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (1 << self.n,):
            raise ValueError(f"expected 2^{self.n} values, got shape {v.shape}")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)


def cosine_grid_sum(i: int, m: int) -> float:
    """sum_{k=1..m} cos(2 i k pi / (2m+1)), in closed form.

    Equals m when (2m+1) divides i and -1/2 otherwise: the 2m+1 unit roots sum
    to zero, and the k = 1..m cosines cover the nontrivial ones twice.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if i < 0:
        raise ValueError("i must be >= 0")
    return float(m) if i % (2 * m + 1) == 0 else -0.5


def _coerce(estimates) -> tuple[np.ndarray, int, int, int, str, int | None]:
    if isinstance(estimates, AncillaEstimates):
        v = estimates.values
        m = estimates.grid.m
        return v, m, 2 * m + 1, estimates.grid.n, "exact", None
    v = np.asarray(estimates, dtype=float)
    if v.ndim != 1:
        raise ValueError("estimates must be a vector")
    m = v.size
    if m < 1 or ((m + 1) & m) != 0:
        raise ValueError(f"grid length {m} is not of the form 2^n - 1")
    return v, m, 2 * m + 1, (m + 1).bit_length() - 1, "exact", None


def decode_naive(estimates, source: str = "exact", shots_per_grid: int | None = None) -> DecodedPopulations:
    """Reference decoder: explicit double loop over (i, k).

    Cosines come from a table cos(2 pi t / L) indexed by i*k mod L, so every
    argument is reduced exactly before any trig is evaluated.
    """
    v, m, L, n, _, _ = _coerce(estimates)
    table = np.cos(np.arange(L) * (2.0 * np.pi / L))
    ks = np.arange(1, m + 1, dtype=np.int64)
    p = np.empty(m + 1)
    p[0] = (1.0 - 2.0 * m + 4.0 * v.sum()) / L
    for i in range(1, m + 1):
        cosines = table[(i * ks) % L]
        p[i] = 4.0 * (1.0 + 2.0 * (v @ cosines)) / L
    return DecodedPopulations(n, p, source, shots_per_grid)


def decode_fast(estimates, source: str = "exact", shots_per_grid: int | None = None) -> DecodedPopulations:
    """Fast decoder: identical contract to :func:`decode_naive`, O(m log m).

    Extending v symmetrically to y of length L (y_k = y_{L-k} = v_k, y_0 = 0)
    makes the DFT real with Y_i = 2 * sum_k v_k cos(2 i x_k), so one rfft
    yields every cosine sum at once.
    """
    v, m, L, n, _, _ = _coerce(estimates)
    y = np.zeros(L)
    y[1 : m + 1] = v
    y[m + 1 :] = v[::-1]
    Y = np.fft.rfft(y).real  # indices 0..m
    p = np.empty(m + 1)
    p[0] = (1.0 - 2.0 * m + 2.0 * Y[0]) / L
    p[1:] = 4.0 * (1.0 + Y[1:]) / L
    return DecodedPopulations(n, p, source, shots_per_grid)


def clip_and_renormalize(decoded: DecodedPopulations) -> DecodedPopulations:
    """Opt-in post-processor: clip negatives to zero and renormalize.

    Not applied anywhere by default; the error metric is defined on the raw
    decoder output.
    """
    v = np.clip(decoded.values, 0.0, None)
    total = v.sum()
    if total <= 0:
        raise ValueError("nothing left to renormalize")
    return DecodedPopulations(decoded.n, v / total, decoded.source, decoded.shots_per_grid)


def tv_error(decoded, truth) -> float:
    """Total variation distance (1/2) sum_i |p_i - w_i| against the true populations."""
    p = decoded.values if isinstance(decoded, DecodedPopulations) else np.asarray(decoded, dtype=float)
    if isinstance(truth, SparsePopulations):
        if p.size != (1 << truth.n):
            raise ValueError("dimension mismatch between decoded values and truth")
        total = 0.0
        covered = np.zeros(p.size, dtype=bool)
        for i, w in truth.entries.items():
            total += abs(p[i] - w)
            covered[i] = True
        total += np.abs(p[~covered]).sum()
        return 0.5 * total
    w = dense_populations(truth)
    if p.size != w.size:
        raise ValueError("dimension mismatch between decoded values and truth")
    return 0.5 * float(np.abs(p - w).sum())


def exact_estimates(state, grid: GridSpec | None = None) -> AncillaEstimates:
    """A(x_k) evaluated exactly for a state, packaged for the decoders."""
    from .grid import ancilla_profile

    if grid is None:
        w = dense_populations(state)
        grid = build_grid(int(w.size).bit_length() - 1)
    return AncillaEstimates(grid, ancilla_profile(state, grid))
