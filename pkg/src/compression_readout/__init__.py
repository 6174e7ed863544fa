"""Compression readout: encode an n-qubit state's populations into one ancilla
qubit via controlled rotations on a Fourier grid, decode them with a discrete
inverse-Fourier rule, and benchmark the result against direct readout under
bit-flip and depolarizing noise."""

from .bounds import (
    BudgetQuery,
    direct_error_binomial_sum,
    direct_error_closed_form,
    chernoff_shot_budget,
    total_budget,
    variance_bound,
)
from .circuits import ARCHITECTURES, CircuitPlan, Gate, build_encoding_circuit, gate_count, simulate_circuit_ancilla
from .decoder import (
    AncillaEstimates,
    DecodedPopulations,
    clip_and_renormalize,
    decode_fast,
    decode_naive,
    exact_estimates,
    cosine_grid_sum,
    tv_error,
)
from .engines import (
    COMPRESSION,
    DIRECT,
    ReadoutResult,
    ShotPlan,
    build_shot_plan,
    compression_readout_exact,
    compression_readout_sampled,
    compression_readout_sparse_exact,
    direct_readout_exact,
    direct_readout_sampled,
    resolve_gate_count,
)
from .grid import GridSpec, ancilla_profile, build_grid, ideal_ancilla_probability
from .noise import (
    DEVICE_PROFILES,
    DeviceProfile,
    GateNoiseModel,
    NO_GATE_NOISE,
    NO_READOUT_ERROR,
    ReadoutErrorModel,
    ancilla_response,
    apply_readout_transition,
    depolarizing_fidelity,
    device_profile,
    gate_error_to_depolarizing,
    noisy_ancilla_probability,
)
from .states import (
    AmplitudeState,
    DENSE_QUBIT_CAP,
    SparsePopulations,
    StateSpec,
    dense_populations,
    haar_state,
    make_state,
    populations,
    sparse_view,
)

__version__ = "0.1.0"
