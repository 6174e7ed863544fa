import math

import numpy as np
import pytest

from compression_readout import (
    GateNoiseModel,
    NO_GATE_NOISE,
    ReadoutErrorModel,
    StateSpec,
    build_shot_plan,
    compression_readout_exact,
    compression_readout_sampled,
    compression_readout_sparse_exact,
    direct_error_closed_form,
    direct_readout_exact,
    direct_readout_sampled,
    make_state,
    populations,
    resolve_gate_count,
)

Z20 = ReadoutErrorModel.symmetric(0.0452)
NOISELESS = ReadoutErrorModel.symmetric(0.0)


# --- shot plan ---------------------------------------------------------------

def test_shot_plan_even_split_with_remainder():
    plan = build_shot_plan(10, 3)
    assert plan.per_grid.tolist() == [4, 3, 3]
    assert plan.per_grid.sum() == plan.total == 10
    plan = build_shot_plan(9, 3)
    assert plan.per_grid.tolist() == [3, 3, 3]


def test_shot_plan_requires_one_shot_per_point():
    with pytest.raises(ValueError):
        build_shot_plan(2, 3)


def test_gate_count_resolution_order():
    assert resolve_gate_count("fully_connected", 5) == 5
    assert resolve_gate_count("nearest_neighbor", 5) == 9
    assert resolve_gate_count("paper_count", 5) == 15
    assert resolve_gate_count("fully_connected", 5, GateNoiseModel(0.1, 99)) == 99
    assert resolve_gate_count("fully_connected", 5, GateNoiseModel(0.1, 99), gates=7) == 7


# --- direct readout ----------------------------------------------------------

def test_direct_exact_no_noise_is_exact():
    st = make_state(StateSpec.haar(1), 4)
    assert direct_readout_exact(st, NOISELESS).tv_error == 0.0


def test_direct_exact_single_qubit_flip():
    st = make_state(StateSpec.basis(1), 1)
    assert direct_readout_exact(st, Z20).tv_error == pytest.approx(0.0452, abs=1e-15)


def test_direct_exact_two_qubit_closed_form_and_oracle():
    st = make_state(StateSpec.basis(3), 2)
    got = direct_readout_exact(st, Z20).tv_error
    assert got == pytest.approx(1 - 0.9548**2, abs=1e-12)
    # dense transition-matrix oracle
    Q = Z20.matrix()
    dist = np.kron(Q, Q) @ np.eye(4)[3]
    oracle = 0.5 * np.abs(dist - np.eye(4)[3]).sum()
    assert got == pytest.approx(oracle, abs=1e-12)


def test_direct_exact_asymmetric_dense_agrees_with_basis_form():
    ro = ReadoutErrorModel.asymmetric(0.0346, 0.0608)
    n = 5
    for idx in (0, 9, 31):
        sparse = make_state(StateSpec.basis(idx), n)
        dense = np.zeros(2**n)
        dense[idx] = 1.0
        assert direct_readout_exact(sparse, ro).tv_error == pytest.approx(
            direct_readout_exact(dense, ro).tv_error, abs=1e-12
        )


def test_direct_sampled_point_mass_without_noise():
    st = make_state(StateSpec.basis(5), 3)
    for total in (1, 10, 1000):
        assert direct_readout_sampled(st, NOISELESS, total, seed=3).tv_error == 0.0


def test_direct_sampled_mean_converges_to_exact():
    st = make_state(StateSpec.basis(7), 3)
    exact = 1 - 0.9548**3
    errs = [
        direct_readout_sampled(st, Z20, 10**6, seed=s).tv_error for s in range(10)
    ]
    sem = np.std(errs, ddof=1) / math.sqrt(len(errs))
    # sampled error is biased high at any finite budget, but must sit within a
    # few standard errors of the infinite-shot value at 1e6 shots
    assert abs(np.mean(errs) - exact) <= 3 * sem + 1e-3


def test_direct_sampling_equals_per_shot_bit_flips():
    # the engine samples one multinomial over Q^n p; flipping each qubit of
    # each shot independently draws from the same distribution, so both
    # empirical frequencies must straddle the exact noisy distribution
    n, xi, total = 2, 0.13, 200_000
    st = make_state(StateSpec.haar(8), n)
    w = populations(st)
    ro = ReadoutErrorModel.symmetric(xi)
    exact = _kron_noisy(w, xi, n)
    freq_engine = direct_readout_sampled(st, ro, total, seed=4).distribution
    rng = np.random.default_rng(99)  # independent per-shot oracle
    raw = rng.choice(2**n, size=total, p=w)
    flips = rng.random((total, n)) < xi
    flipped = raw ^ (flips @ (1 << np.arange(n)))
    freq_oracle = np.bincount(flipped, minlength=2**n) / total
    tol = 5 * np.sqrt(0.25 / total) * (2**n)
    assert 0.5 * np.abs(freq_engine - exact).sum() < tol
    assert 0.5 * np.abs(freq_oracle - exact).sum() < tol


def _kron_noisy(w, xi, n):
    Q = ReadoutErrorModel.symmetric(xi).matrix()
    M = np.eye(1)
    for _ in range(n):
        M = np.kron(Q, M)
    return M @ w


def test_direct_sampled_single_shot_reproducible():
    st = make_state(StateSpec.basis(2), 2)
    a = direct_readout_sampled(st, Z20, 1, seed=11).tv_error
    b = direct_readout_sampled(st, Z20, 1, seed=11).tv_error
    assert a == b
    freq = direct_readout_sampled(st, Z20, 1, seed=11).distribution
    assert freq.sum() == 1.0 and np.count_nonzero(freq) == 1


# --- compression readout, exact -----------------------------------------------

def test_compression_exact_recovers_noiselessly():
    st = make_state(StateSpec.haar(5), 4)
    assert compression_readout_exact(st).tv_error <= 1e-9


def test_compression_exact_matches_affine_hand_computation():
    # symmetric readout without gate noise: p_i = a w_i + (1-a)(2-delta_i0)/L
    n, xi = 2, 0.0452
    st = make_state(StateSpec.basis(3), 2)
    w = np.eye(4)[3]
    a = 1 - 2 * xi
    L = 2 * (2**n - 1) + 1
    p_hand = a * w + (1 - a) * np.array([1.0, 2.0, 2.0, 2.0]) / L
    want = 0.5 * np.abs(p_hand - w).sum()
    got = compression_readout_exact(
        make_state(StateSpec.basis(3), n), ReadoutErrorModel.symmetric(xi), NO_GATE_NOISE
    )
    assert got.tv_error == pytest.approx(want, abs=1e-12)
    np.testing.assert_allclose(got.decoded.values, p_hand, atol=1e-12)


def _extended_precision_pipeline(w, xi, gamma, G):
    # independent oracle: all 2^n - 1 grid points in 80-bit precision
    ld = np.longdouble
    w = w.astype(ld)
    m = w.size - 1
    L = 2 * m + 1
    ks = np.arange(1, m + 1)
    idx = np.arange(w.size)
    f = ld(1)
    for _ in range(G):
        f = f * (ld(1) - ld(gamma))
    a = (ld(1) - 2 * ld(xi)) * f
    b = ld(xi) + (ld(1) - 2 * ld(xi)) * (ld(1) - f) / 2
    pi = ld("3.14159265358979323846264338327950288")
    est = np.empty(m, dtype=ld)
    for j, k in enumerate(ks):
        A = (w * np.cos(idx * (k * pi / L), dtype=ld) ** 2).sum()
        est[j] = a * A + b
    p = np.empty(m + 1, dtype=ld)
    p[0] = (1 - 2 * ld(m) + 4 * est.sum()) / L
    for i in range(1, m + 1):
        coss = np.cos((2 * i * ks % (2 * L)) * (pi / L), dtype=ld)
        p[i] = 4 * (1 + 2 * (est * coss).sum()) / L
    return float(0.5 * np.abs(p - w).sum())


def test_compression_exact_against_extended_precision_oracle():
    n, gamma, G = 6, 0.0063, 6
    st = make_state(StateSpec.uniform(), n)
    got = compression_readout_exact(
        st, NOISELESS, GateNoiseModel(gamma), architecture="fully_connected"
    ).tv_error
    want = _extended_precision_pipeline(populations(st), 0.0, gamma, G)
    assert got == pytest.approx(want, abs=1e-10)


def test_compression_exact_rejects_beyond_cap():
    st = make_state(StateSpec.all_ones(), 60)
    with pytest.raises(ValueError):
        compression_readout_exact(st, Z20)


# --- compression readout, sampled ----------------------------------------------

def test_compression_sampled_deterministic_point_mass():
    st = make_state(StateSpec.basis(0), 3)
    for total in (7, 100, 5000):
        res = compression_readout_sampled(st, NOISELESS, NO_GATE_NOISE, total, seed=0)
        assert res.tv_error == 0.0  # every grid point reads 0 with certainty


def test_compression_sampled_reproducible_and_seed_sensitive():
    st = make_state(StateSpec.haar(4), 4)
    a = compression_readout_sampled(st, Z20, NO_GATE_NOISE, 10_000, seed=1).tv_error
    b = compression_readout_sampled(st, Z20, NO_GATE_NOISE, 10_000, seed=1).tv_error
    c = compression_readout_sampled(st, Z20, NO_GATE_NOISE, 10_000, seed=2).tv_error
    assert a == b
    assert a != c


def test_compression_sampled_needs_one_shot_per_grid_point():
    st = make_state(StateSpec.haar(4), 4)
    with pytest.raises(ValueError):
        compression_readout_sampled(st, Z20, NO_GATE_NOISE, 10, seed=0)


def test_compression_sampled_converges_monotonically_in_the_mean():
    st = make_state(StateSpec.haar(9), 4)
    ladder = [100, 1000, 10_000, 100_000]
    means = []
    for total in ladder:
        errs = [
            compression_readout_sampled(st, Z20, NO_GATE_NOISE, total, seed=s).tv_error
            for s in range(10)
        ]
        means.append(np.mean(errs))
    assert all(b < a for a, b in zip(means, means[1:]))
    exact = compression_readout_exact(st, Z20, NO_GATE_NOISE).tv_error
    assert means[-1] >= exact
    assert means[-1] - exact < 0.05


# --- sparse closed-form engine ---------------------------------------------------

def test_sparse_engine_huge_register_without_noise():
    st = make_state(StateSpec.all_ones(), 1000)
    assert compression_readout_sparse_exact(st).tv_error == pytest.approx(0.0, abs=1e-15)


def test_sparse_engine_matches_dense_engine():
    st = make_state(StateSpec.basis(255), 8)
    dense = np.zeros(256)
    dense[255] = 1.0
    for ro in (Z20, ReadoutErrorModel.asymmetric(0.0346, 0.0608)):
        got = compression_readout_sparse_exact(
            st, ro, GateNoiseModel(0.006293), architecture="fully_connected"
        ).tv_error
        want = compression_readout_exact(
            dense, ro, GateNoiseModel(0.006293), architecture="fully_connected"
        ).tv_error
        assert got == pytest.approx(want, abs=1e-9)


def test_sparse_engine_multi_support_matches_dense():
    entries = {0: 0.25, 3: 0.5, 12: 0.25}
    st = make_state(StateSpec.explicit_populations(entries), 4)
    dense = np.zeros(16)
    for i, v in entries.items():
        dense[i] = v
    ro = ReadoutErrorModel.asymmetric(0.01, 0.04)
    gate = GateNoiseModel(0.002)
    got = compression_readout_sparse_exact(st, ro, gate, architecture="paper_count").tv_error
    want = compression_readout_exact(dense, ro, gate, architecture="paper_count").tv_error
    assert got == pytest.approx(want, abs=1e-10)


def test_sparse_engine_beats_direct_closed_form_at_n_100():
    st = make_state(StateSpec.all_ones(), 100)
    comp = compression_readout_sparse_exact(
        st, Z20, GateNoiseModel(0.0063), gates=100
    ).tv_error
    direct = direct_error_closed_form(100, Z20, 2**100 - 1)
    assert direct == pytest.approx(1 - (1 - 0.0452) ** 100, abs=1e-15)
    assert direct > 0.99
    assert comp < direct


def test_sparse_engine_reports_support_values():
    st = make_state(StateSpec.all_ones(), 12)
    res = compression_readout_sparse_exact(st, Z20)
    assert res.metadata["sparse"] is True
    support = res.metadata["decoded_support"]
    assert str(2**12 - 1) in support and "0" in support


def test_sparse_engine_matches_dense_on_random_states():
    # the affine form p_i = a w_i + c_i holds for arbitrary states, so the
    # closed-form engine must track the grid-enumerating one everywhere
    rng = np.random.default_rng(17)
    for trial in range(25):
        n = int(rng.integers(1, 8))
        support = rng.choice(2**n, size=int(rng.integers(1, 2**n + 1)), replace=False)
        weights = rng.dirichlet(np.ones(support.size))
        entries = {int(i): float(v) for i, v in zip(support, weights)}
        st = make_state(StateSpec.explicit_populations(entries), n)
        ro = ReadoutErrorModel.asymmetric(*rng.uniform(0, 0.4, size=2))
        gate = GateNoiseModel(float(rng.uniform(0, 0.05)))
        arch = ("fully_connected", "nearest_neighbor", "paper_count")[trial % 3]
        dense = np.zeros(2**n)
        for i, v in entries.items():
            dense[i] = v
        got = compression_readout_sparse_exact(st, ro, gate, architecture=arch).tv_error
        want = compression_readout_exact(dense, ro, gate, architecture=arch).tv_error
        assert got == pytest.approx(want, abs=1e-9)


def test_decoded_support_matches_dense_decoder_values():
    st = make_state(StateSpec.basis(21), 6)
    dense = np.zeros(64)
    dense[21] = 1.0
    ro = ReadoutErrorModel.asymmetric(0.02, 0.06)
    gate = GateNoiseModel(0.004)
    sparse_res = compression_readout_sparse_exact(st, ro, gate)
    dense_res = compression_readout_exact(dense, ro, gate)
    support = {int(k): v for k, v in sparse_res.metadata["decoded_support"].items()}
    for idx, val in support.items():
        assert val == pytest.approx(dense_res.decoded.values[idx], abs=1e-12)
    off = sparse_res.metadata["decoded_off_support"]
    others = [dense_res.decoded.values[i] for i in range(64) if i not in support]
    np.testing.assert_allclose(others, off, atol=1e-12)


def test_sycamore_2021_zero_state_crossover_near_450():
    # with the quadratic compiled-gate budget and asymmetric rates the
    # compression advantage for |0...0> appears at about n = 450
    prof_e0, prof_e1, gamma = 0.009, 0.0255, 0.006613
    ro = ReadoutErrorModel.asymmetric(prof_e0, prof_e1)
    crossing = None
    for n in range(400, 500):
        comp = compression_readout_sparse_exact(
            make_state(StateSpec.all_zeros(), n), ro, GateNoiseModel(gamma),
            architecture="paper_count",
        ).tv_error
        direct = direct_error_closed_form(n, ro, 0)
        if comp < direct:
            crossing = n
            break
    assert crossing is not None and 430 <= crossing <= 480
