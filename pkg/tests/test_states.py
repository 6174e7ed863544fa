import numpy as np
import pytest

from compression_readout import (
    AmplitudeState,
    SparsePopulations,
    StateSpec,
    dense_populations,
    make_state,
    populations,
    sparse_view,
)


def test_basis_zero_is_point_mass_on_zero():
    st = make_state(StateSpec.basis(0), 2)
    assert isinstance(st, SparsePopulations)
    assert st.entries == {0: 1.0}


def test_all_ones_hits_top_index():
    st = make_state(StateSpec.all_ones(), 3)
    assert st.entries == {7: 1.0}


def test_all_zeros_equals_basis_zero():
    assert make_state(StateSpec.all_zeros(), 5).entries == make_state(StateSpec.basis(0), 5).entries


def test_basis_index_out_of_range():
    with pytest.raises(ValueError):
        make_state(StateSpec.basis(4), 2)


def test_haar_is_normalized_and_seed_deterministic():
    a = make_state(StateSpec.haar(42), 4)
    b = make_state(StateSpec.haar(42), 4)
    c = make_state(StateSpec.haar(43), 4)
    assert abs(np.sum(np.abs(a.amplitudes) ** 2) - 1.0) < 1e-12
    np.testing.assert_array_equal(a.amplitudes, b.amplitudes)
    assert np.any(a.amplitudes != c.amplitudes)


def test_haar_populations_are_uniform_on_average():
    # mean of each population over many draws approaches 1/2^n
    n, draws = 4, 10_000
    acc = np.zeros(2**n)
    for seed in range(draws):
        acc += populations(make_state(StateSpec.haar(seed), n))
    acc /= draws
    assert np.all(np.abs(acc - 1 / 16) < 0.002)


def test_populations_matches_elementwise_magnitudes():
    st = make_state(StateSpec.haar(7), 3)
    expected = np.array([a.real**2 + a.imag**2 for a in st.amplitudes])  # independent loop
    np.testing.assert_allclose(populations(st), expected, rtol=0, atol=1e-15)
    assert abs(populations(st).sum() - 1.0) < 1e-10


def test_phases_are_discarded():
    st = make_state(StateSpec.explicit_amplitudes([1 / np.sqrt(2), 1j / np.sqrt(2)]), 1)
    np.testing.assert_allclose(populations(st), [0.5, 0.5], atol=1e-15)


def test_explicit_amplitudes_are_renormalized():
    st = make_state(StateSpec.explicit_amplitudes([3.0, 4.0]), 1)
    np.testing.assert_allclose(populations(st), [9 / 25, 16 / 25], atol=1e-15)


def test_unnormalizable_input_rejected():
    with pytest.raises(ValueError):
        make_state(StateSpec.explicit_amplitudes([0.0, 0.0]), 1)
    with pytest.raises(ValueError):
        AmplitudeState(1, np.array([1.0, 1.0]))


def test_dense_cap_applies_to_dense_specs_only():
    with pytest.raises(ValueError, match="cap"):
        make_state(StateSpec.haar(0), 30)
    big = make_state(StateSpec.all_ones(), 1000)
    assert big.entries == {2**1000 - 1: 1.0}


def test_sparse_invariants():
    with pytest.raises(ValueError):
        SparsePopulations(2, {0: 0.5, 1: 0.4})  # sums to 0.9
    with pytest.raises(ValueError):
        SparsePopulations(2, {5: 1.0})  # out of range


def test_uniform_state():
    st = make_state(StateSpec.uniform(), 2)
    np.testing.assert_allclose(populations(st), np.full(4, 0.25), atol=1e-15)


def test_spec_parsing_round_trip():
    assert StateSpec.parse("ones").kind == "ones"
    assert StateSpec.parse("basis:5").index == 5
    assert StateSpec.parse("haar:9").seed == 9
    assert StateSpec.parse("haar").seed is None
    with pytest.raises(ValueError):
        StateSpec.parse("bogus")


def test_dense_and_sparse_views_agree():
    st = make_state(StateSpec.haar(3), 3)
    w = dense_populations(st)
    sv = sparse_view(st)
    for i, v in sv.entries.items():
        assert v == w[i]
    assert abs(sum(sv.entries.values()) - 1.0) < 1e-10
