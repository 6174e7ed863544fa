"""Quantum state construction and population extraction.

Basis-state indexing convention, used everywhere in this package: the integer
label of a computational basis state is i = sum_j b_j 2^j, i.e. qubit j
carries bit weight 2^j.  The encoding circuit relies on this when it rotates
the ancilla by 2^j * x conditioned on qubit j.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .sampling import STREAM_STATE, complex_normals, substream

NORM_TOL = 1e-10
DENSE_QUBIT_CAP = 24


@dataclass(frozen=True)
class AmplitudeState:
    """Dense n-qubit pure state: 2^n complex amplitudes, unit norm."""

    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("qubit count must be >= 1")
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (2**self.n,):
            raise ValueError(f"expected 2^{self.n} amplitudes, got shape {amps.shape}")
        norm_sq = float(np.sum(np.abs(amps) ** 2))
        if abs(norm_sq - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized: sum |a_i|^2 = {norm_sq!r}")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)


@dataclass(frozen=True)
class SparsePopulations:
    """Populations |a_i|^2 stored as an index -> weight map.

    Indices are plain Python integers, so the representation works for any n
    (basis states with n = 1000 included).  Phases are already discarded.
    """

    n: int
    entries: dict[int, float]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("qubit count must be >= 1")
        dim = 1 << self.n
        total = 0.0
        clean: dict[int, float] = {}
        for i, w in self.entries.items():
            i = int(i)
            if not 0 <= i < dim:
                raise ValueError(f"basis index {i} out of range for n={self.n}")
            if i in clean:
                raise ValueError(f"duplicate basis index {i}")
            w = float(w)
            if w < -NORM_TOL or w > 1 + NORM_TOL:
                raise ValueError(f"weight {w!r} outside [0, 1]")
            clean[i] = w
            total += w
        if abs(total - 1.0) > NORM_TOL:
            raise ValueError(f"weights sum to {total!r}, expected 1")
        object.__setattr__(self, "entries", clean)

    @property
    def support(self) -> list[int]:
        return sorted(self.entries)


@dataclass(frozen=True)
class StateSpec:
    """Recipe for a state; realized by :func:`make_state`."""

    kind: str
    index: int | None = None
    seed: int | None = None
    amplitudes: tuple | None = None
    populations: tuple | None = None

    @classmethod
    def basis(cls, index: int) -> StateSpec:
        return cls("basis", index=int(index))

    @classmethod
    def all_zeros(cls) -> StateSpec:
        return cls("zeros")

    @classmethod
    def all_ones(cls) -> StateSpec:
        return cls("ones")

    @classmethod
    def uniform(cls) -> StateSpec:
        return cls("uniform")

    @classmethod
    def haar(cls, seed: int | None = None) -> StateSpec:
        return cls("haar", seed=seed)

    @classmethod
    def explicit_amplitudes(cls, amplitudes) -> StateSpec:
        return cls("amplitudes", amplitudes=tuple(complex(a) for a in amplitudes))

    @classmethod
    def explicit_populations(cls, entries: dict[int, float]) -> StateSpec:
        return cls("populations", populations=tuple(sorted((int(i), float(w)) for i, w in entries.items())))

    @classmethod
    def parse(cls, text: str) -> StateSpec:
        """Parse the config/CLI spelling: zeros | ones | uniform | haar[:seed] | basis:i."""
        head, _, arg = text.strip().partition(":")
        head = head.lower()
        if head == "zeros":
            return cls.all_zeros()
        if head == "ones":
            return cls.all_ones()
        if head == "uniform":
            return cls.uniform()
        if head == "haar":
            return cls.haar(int(arg) if arg else None)
        if head == "basis":
            if not arg:
                raise ValueError("basis state needs an index, e.g. 'basis:5'")
            return cls.basis(int(arg))
        raise ValueError(f"unknown state spec {text!r}")

    def label(self) -> str:
        if self.kind == "basis":
            return f"basis:{self.index}"
        if self.kind == "haar" and self.seed is not None:
            return f"haar:{self.seed}"
        return self.kind


def haar_state(n: int, rng: np.random.Generator) -> AmplitudeState:
    """Draw a Haar-random pure state: normalized vector of complex Gaussians."""
    z = complex_normals(rng, 1 << n)
    z = z / np.sqrt(np.sum(np.abs(z) ** 2))
    return AmplitudeState(n, z)


def make_state(
    spec: StateSpec, n: int, dense_cap: int = DENSE_QUBIT_CAP
) -> AmplitudeState | SparsePopulations:
    """Realize a state spec at a given qubit count.

    Sparse recipes (basis / zeros / ones / explicit populations) are uncapped;
    dense ones refuse to allocate beyond ``dense_cap`` qubits.
    """
    if n < 1:
        raise ValueError("qubit count must be >= 1")
    kind = spec.kind
    if kind == "zeros":
        return SparsePopulations(n, {0: 1.0})
    if kind == "ones":
        return SparsePopulations(n, {(1 << n) - 1: 1.0})
    if kind == "basis":
        if spec.index is None or not 0 <= spec.index < (1 << n):
            raise ValueError(f"basis index {spec.index} out of range for n={n}")
        return SparsePopulations(n, {spec.index: 1.0})
    if kind == "populations":
        return SparsePopulations(n, dict(spec.populations or ()))
    if n > dense_cap:
        raise ValueError(
            f"dense state with n={n} exceeds the cap of {dense_cap} qubits; "
            "use a sparse spec or raise dense_cap"
        )
    if kind == "uniform":
        dim = 1 << n
        return AmplitudeState(n, np.full(dim, 1.0 / np.sqrt(dim), dtype=np.complex128))
    if kind == "haar":
        seed = 0 if spec.seed is None else spec.seed
        return haar_state(n, substream(seed, 0, STREAM_STATE))
    if kind == "amplitudes":
        amps = np.asarray(spec.amplitudes, dtype=np.complex128)
        norm = np.sqrt(np.sum(np.abs(amps) ** 2))
        if norm == 0 or not np.isfinite(norm):
            raise ValueError("explicit amplitudes are not normalizable")
        return AmplitudeState(n, amps / norm)
    raise ValueError(f"unknown state kind {kind!r}")


def populations(state: AmplitudeState) -> np.ndarray:
    """|a_i|^2 for every basis index, as a dense vector."""
    return np.abs(state.amplitudes) ** 2


def dense_populations(state) -> np.ndarray:
    """Populations of any state representation as a dense float vector."""
    if isinstance(state, AmplitudeState):
        return populations(state)
    if isinstance(state, SparsePopulations):
        if state.n > DENSE_QUBIT_CAP:
            raise ValueError(f"cannot densify n={state.n} sparse populations")
        w = np.zeros(1 << state.n)
        for i, v in state.entries.items():
            w[i] = v
        return w
    w = np.asarray(state, dtype=float)
    if w.ndim != 1 or (w.size & (w.size - 1)) != 0 or w.size < 2:
        raise ValueError("population vector length must be a power of two, >= 2")
    return w


def sparse_view(state) -> SparsePopulations:
    """SparsePopulations view of any state representation."""
    if isinstance(state, SparsePopulations):
        return state
    w = dense_populations(state)
    n = int(w.size).bit_length() - 1
    return SparsePopulations(n, {int(i): float(w[i]) for i in np.nonzero(w)[0]})
