"""End-to-end readout pipelines.

Four ways to read a state, all scored by the total variation distance E
between what was read and the true populations:

* direct readout, exact:      E = (1/2) || (Q^n - I) w ||_1
* direct readout, sampled:    multinomial shots from Q^n w
* compression readout, exact: decode the exact noisy ancilla profile
* compression readout, sampled: binomial shots per grid point, then decode

plus a closed-form engine for sparse states at any n.  That engine leans on
two exact facts: the measured ancilla probability is affine in the ideal one
(slope a, offset b, see :mod:`.noise`), and the decoder is affine with
decode(exact profile) = truth, so the decoded output is

    p_i = a * w_i + c_i,   c_0 = ((1-a) - 2m(1-a-2b)) / (2m+1),
                           c_(i>0) = 4 (1-a-b) / (2m+1)

and E needs only the support terms plus one scalar for all off-support
indices.  Off-support counts are kept as exact integers so n = 1000 works.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .circuits import ARCHITECTURES, gate_count
from .decoder import AncillaEstimates, DecodedPopulations, decode_fast, tv_error
from .grid import ancilla_profile, build_grid
from .noise import (
    GateNoiseModel,
    NO_GATE_NOISE,
    NO_READOUT_ERROR,
    ReadoutErrorModel,
    ancilla_response,
    apply_readout_transition,
)
from .sampling import STREAM_REGISTER, grid_stream, substream
from .states import (
    AmplitudeState,
    DENSE_QUBIT_CAP,
    SparsePopulations,
    dense_populations,
)

DIRECT = "direct"
COMPRESSION = "compression"


@dataclass(frozen=True)
class ShotPlan:
    """Total budget split as evenly as possible across the m grid points."""

    total: int
    per_grid: np.ndarray

    def __post_init__(self):
        pg = np.asarray(self.per_grid, dtype=np.int64)
        pg.flags.writeable = False
        object.__setattr__(self, "per_grid", pg)


def build_shot_plan(total: int, m: int) -> ShotPlan:
    if m < 1:
        raise ValueError("grid count must be >= 1")
    if total < m:
        raise ValueError(f"need at least one shot per grid point ({total} < {m})")
    per = np.full(m, total // m, dtype=np.int64)
    per[: total % m] += 1
    return ShotPlan(total, per)


@dataclass
class ReadoutResult:
    method: str
    tv_error: float
    n: int
    distribution: np.ndarray | None = None
    decoded: DecodedPopulations | None = None
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "method": self.method,
            "n": self.n,
            "tv_error": self.tv_error,
            "metadata": self.metadata,
        }
        if self.distribution is not None:
            out["distribution"] = [float(v) for v in self.distribution]
        if self.decoded is not None:
            out["decoded"] = [float(v) for v in self.decoded.values]
            out["decoded_source"] = self.decoded.source
        return out


def resolve_gate_count(
    architecture: str, n: int, gate: GateNoiseModel = NO_GATE_NOISE, gates: int | None = None
) -> int:
    """Effective two-qubit gate count: explicit value, else model override,
    else the architecture's count."""
    if gates is not None:
        return gates
    if gate.gate_count_override is not None:
        return gate.gate_count_override
    if architecture not in ARCHITECTURES:
        raise ValueError(f"unknown architecture {architecture!r}")
    return gate_count(architecture, n)


def _meta(n, readout, gate, **extra) -> dict:
    meta = {"n": n, "e0": readout.e0, "e1": readout.e1, "gamma": gate.gamma}
    meta.update(extra)
    return meta


def _is_basis(state) -> bool:
    return isinstance(state, SparsePopulations) and len(state.entries) == 1


def direct_readout_exact(state, readout: ReadoutErrorModel) -> ReadoutResult:
    """Infinite-shot direct readout.

    Dense states go through the transition-matrix sweeps; basis states use
    the exact product form 1 - (1-e0)^z (1-e1)^o (z, o = zero/one bits), which
    collapses to 1 - (1-xi)^n in the symmetric model.
    """
    if _is_basis(state):
        (index, w), = state.entries.items()
        n = state.n
        ones = int(index).bit_count()
        if readout.is_symmetric:
            err = 1.0 - (1.0 - readout.xi) ** n
        else:
            err = 1.0 - (1.0 - readout.e0) ** (n - ones) * (1.0 - readout.e1) ** ones
        return ReadoutResult(
            DIRECT, err, n, metadata=_meta(n, readout, NO_GATE_NOISE, shots=None, source="exact")
        )
    if isinstance(state, SparsePopulations) and state.n > DENSE_QUBIT_CAP:
        raise ValueError("exact direct readout beyond the dense cap needs a basis state")
    w = dense_populations(state)
    n = int(w.size).bit_length() - 1
    dist = apply_readout_transition(w, readout, n)
    err = 0.5 * float(np.abs(dist - w).sum())
    return ReadoutResult(
        DIRECT, err, n, distribution=dist,
        metadata=_meta(n, readout, NO_GATE_NOISE, shots=None, source="exact"),
    )


def direct_readout_sampled(
    state, readout: ReadoutErrorModel, total_shots: int, seed: int, rep: int = 0
) -> ReadoutResult:
    """Finite-shot direct readout: one multinomial over the noisy distribution.

    Statistically identical to flipping each qubit of each shot, and orders of
    magnitude faster.  Deterministic per (seed, rep).
    """
    if total_shots < 1:
        raise ValueError("need at least one shot")
    w = dense_populations(state)
    n = int(w.size).bit_length() - 1
    dist = apply_readout_transition(w, readout, n)
    dist = dist / dist.sum()  # remove float dust before sampling
    rng = substream(seed, rep, STREAM_REGISTER)
    freq = rng.multinomial(total_shots, dist) / total_shots
    err = 0.5 * float(np.abs(freq - w).sum())
    return ReadoutResult(
        DIRECT, err, n, distribution=freq,
        metadata=_meta(n, readout, NO_GATE_NOISE, shots=total_shots, seed=seed, rep=rep, source="sampled"),
    )


def _noisy_profile(state, n, readout, gate, gates):
    grid = build_grid(n)
    a, b = ancilla_response(readout, gate, gates)
    q = a * ancilla_profile(state, grid) + b
    # exact values live in [0,1]; clip off float dust so sampling stays legal
    return grid, np.clip(q, 0.0, 1.0)


def compression_readout_exact(
    state,
    readout: ReadoutErrorModel = NO_READOUT_ERROR,
    gate: GateNoiseModel = NO_GATE_NOISE,
    architecture: str = "fully_connected",
    gates: int | None = None,
) -> ReadoutResult:
    """Infinite-shot compression readout: decode the exact noisy profile.

    Enumerates all m = 2^n - 1 grid points, so it needs n within the dense
    cap; the sparse closed-form engine covers everything beyond.
    """
    w = dense_populations(state)
    n = int(w.size).bit_length() - 1
    G = resolve_gate_count(architecture, n, gate, gates)
    grid, q = _noisy_profile(state, n, readout, gate, G)
    decoded = decode_fast(AncillaEstimates(grid, q))
    err = tv_error(decoded, w)
    return ReadoutResult(
        COMPRESSION, err, n, decoded=decoded,
        metadata=_meta(n, readout, gate, shots=None, architecture=architecture, gates=G, source="exact"),
    )


def compression_readout_sampled(
    state,
    readout: ReadoutErrorModel,
    gate: GateNoiseModel,
    total_shots: int,
    seed: int,
    rep: int = 0,
    architecture: str = "fully_connected",
    gates: int | None = None,
) -> ReadoutResult:
    """Finite-shot compression readout.

    Shots are split by :func:`build_shot_plan`; the count at grid point k is
    binomial in the noisy probability, drawn from the (seed, rep, k) stream,
    so results do not depend on evaluation order.
    """
    w = dense_populations(state)
    n = int(w.size).bit_length() - 1
    G = resolve_gate_count(architecture, n, gate, gates)
    grid, q = _noisy_profile(state, n, readout, gate, G)
    plan = build_shot_plan(total_shots, grid.m)
    est = np.empty(grid.m)
    for k in range(grid.m):
        rng = grid_stream(seed, rep, k)
        est[k] = rng.binomial(plan.per_grid[k], q[k]) / plan.per_grid[k]
    decoded = decode_fast(
        AncillaEstimates(grid, est), source="sampled", shots_per_grid=int(plan.per_grid.min())
    )
    err = tv_error(decoded, w)
    return ReadoutResult(
        COMPRESSION, err, n, decoded=decoded,
        metadata=_meta(
            n, readout, gate, shots=total_shots, seed=seed, rep=rep,
            architecture=architecture, gates=G, source="sampled",
        ),
    )


def _affine_decode_constants(a: float, b: float, n: int) -> tuple[float, float]:
    """Constants c_0, c_generic of the decoded output p_i = a w_i + c_i.

    Ratios are taken with exact integer numerators/denominators, so they stay
    correctly rounded when 2^n overflows a float.
    """
    m = (1 << n) - 1
    L = 2 * m + 1
    c0 = (1.0 - a) * (1 / L) - (1.0 - a - 2.0 * b) * ((2 * m) / L)
    cg = 4.0 * (1.0 - a - b) * (1 / L)
    return c0, cg


def compression_readout_sparse_exact(
    state: SparsePopulations,
    readout: ReadoutErrorModel = NO_READOUT_ERROR,
    gate: GateNoiseModel = NO_GATE_NOISE,
    architecture: str = "fully_connected",
    gates: int | None = None,
) -> ReadoutResult:
    """Infinite-shot compression readout without enumerating the grid.

    Exact for any support size; agrees with the dense engine wherever both
    apply.  The per-index decoded values on the support, plus the two
    off-support constants, are recorded in the metadata.
    """
    if not isinstance(state, SparsePopulations):
        raise TypeError("sparse engine needs SparsePopulations input")
    n = state.n
    G = resolve_gate_count(architecture, n, gate, gates)
    a, b = ancilla_response(readout, gate, G)
    c0, cg = _affine_decode_constants(a, b, n)

    total = 0.0
    support_decoded: dict[int, float] = {}
    nonzero_support = 0
    for i, w in state.entries.items():
        c = c0 if i == 0 else cg
        p_i = a * w + c
        support_decoded[i] = p_i
        total += abs(p_i - w)
        if i != 0:
            nonzero_support += 1
    if 0 not in state.entries:
        total += abs(c0)
        support_decoded[0] = c0
    # all remaining indices decode to the same constant cg
    off_count = (1 << n) - 1 - nonzero_support
    total += abs(4.0 * (1.0 - a - b)) * ((off_count) / (2 * ((1 << n) - 1) + 1))
    err = 0.5 * total
    return ReadoutResult(
        COMPRESSION, err, n,
        metadata=_meta(
            n, readout, gate, shots=None, architecture=architecture, gates=G,
            source="exact", sparse=True,
            decoded_support={str(i): v for i, v in sorted(support_decoded.items())},
            decoded_off_support=cg,
        ),
    )
