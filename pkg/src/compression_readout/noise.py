"""Readout bit-flip and per-gate depolarizing noise models, plus device presets.

Readout noise acts per qubit and per shot: a prepared 0 is read as 1 with
probability e0, a prepared 1 as 0 with probability e1 (symmetric model:
e0 = e1 = xi).  On populations this is the single-qubit transition matrix

    Q = [[1-e0, e1 ],
         [ e0 , 1-e1]]

applied once per qubit.  Gate noise is a depolarizing channel of strength
gamma per two-qubit gate; after G gates the ideal component survives with
fidelity f = (1-gamma)^G, and since only the ancilla marginal is ever
consumed (the fully mixed state reads 0 with probability exactly 1/2) its
entire effect on the measured probability is

    A -> f*A + (1-f)/2.

Composing both channels, the measured |0> probability is affine in the ideal
one with slope (1-e0-e1)*f.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_READOUT_RATE = 0.5  # rates at or above 0.5 make Q non-diagnostic


@dataclass(frozen=True)
class ReadoutErrorModel:
    e0: float  # P(read 1 | prepared 0)
    e1: float  # P(read 0 | prepared 1)

    def __post_init__(self):
        for name, rate in (("e0", self.e0), ("e1", self.e1)):
            if not 0.0 <= rate < MAX_READOUT_RATE:
                raise ValueError(f"{name}={rate!r} outside [0, 0.5)")

    @classmethod
    def symmetric(cls, xi: float) -> ReadoutErrorModel:
        return cls(xi, xi)

    @classmethod
    def asymmetric(cls, e0: float, e1: float) -> ReadoutErrorModel:
        return cls(e0, e1)

    @property
    def is_symmetric(self) -> bool:
        return self.e0 == self.e1

    @property
    def xi(self) -> float:
        if not self.is_symmetric:
            raise ValueError("xi is only defined for the symmetric model")
        return self.e0

    def matrix(self) -> np.ndarray:
        return np.array([[1 - self.e0, self.e1], [self.e0, 1 - self.e1]])


@dataclass(frozen=True)
class GateNoiseModel:
    gamma: float = 0.0  # depolarizing probability per two-qubit gate
    gate_count_override: int | None = None

    def __post_init__(self):
        if not 0.0 <= self.gamma < 1.0:
            raise ValueError(f"gamma={self.gamma!r} outside [0, 1)")
        if self.gate_count_override is not None and self.gate_count_override < 0:
            raise ValueError("gate count override must be >= 0")


NO_READOUT_ERROR = ReadoutErrorModel(0.0, 0.0)
NO_GATE_NOISE = GateNoiseModel(0.0)


def depolarizing_fidelity(gamma: float, gates: int) -> float:
    """Surviving ideal fraction f = (1-gamma)^G after G depolarizing gates."""
    if not 0.0 <= gamma < 1.0:
        raise ValueError(f"gamma={gamma!r} outside [0, 1)")
    if gates < 0:
        raise ValueError("gate count must be >= 0")
    return (1.0 - gamma) ** gates


def ancilla_response(
    readout: ReadoutErrorModel,
    gate: GateNoiseModel = NO_GATE_NOISE,
    gates: int = 0,
) -> tuple[float, float]:
    """(slope, offset) of the ideal -> measured map for the ancilla |0> probability.

    measured = slope * A_ideal + offset, slope = (1-e0-e1)*f.
    """
    f = depolarizing_fidelity(gate.gamma, gates)
    slope = (1.0 - readout.e0 - readout.e1) * f
    offset = readout.e1 + (1.0 - readout.e0 - readout.e1) * (1.0 - f) / 2.0
    return slope, offset


def noisy_ancilla_probability(
    a_ideal: float,
    readout: ReadoutErrorModel,
    gate: GateNoiseModel = NO_GATE_NOISE,
    gates: int = 0,
):
    """Probability of reading 0 on the ancilla under both noise channels.

    Accepts a scalar or an array of ideal probabilities.
    """
    slope, offset = ancilla_response(readout, gate, gates)
    return slope * a_ideal + offset


def apply_readout_transition(p: np.ndarray, model: ReadoutErrorModel, n: int) -> np.ndarray:
    """Q^(tensor n) applied to a population vector by n single-qubit sweeps.

    O(n 2^n); the 2^n x 2^n matrix is never formed.
    """
    p = np.asarray(p, dtype=float)
    if p.shape != (1 << n,):
        raise ValueError(f"expected a length-2^{n} vector, got shape {p.shape}")
    Q = model.matrix()
    t = p.reshape([2] * n)
    for axis in range(n):
        t = np.moveaxis(np.tensordot(Q, t, axes=([1], [axis])), 0, axis)
    return t.reshape(-1)


def gate_error_to_depolarizing(e: float, dim: int) -> float:
    """Convert a published gate error e to a depolarizing probability.

    gamma = e / (1 - 1/D^2) with D the Hilbert-space dimension of the gate.
    """
    if dim < 2:
        raise ValueError("Hilbert-space dimension must be >= 2")
    if not 0.0 <= e < 1.0:
        raise ValueError(f"gate error {e!r} outside [0, 1)")
    return e / (1.0 - 1.0 / dim**2)


@dataclass(frozen=True)
class DeviceProfile:
    """Published error rates of a processor (symmetric and, where available,
    asymmetric readout)."""

    name: str
    gamma: float
    xi: float
    e0: float | None
    e1: float | None

    def readout(self, symmetric: bool = True) -> ReadoutErrorModel:
        if symmetric:
            return ReadoutErrorModel.symmetric(self.xi)
        if self.e0 is None or self.e1 is None:
            raise ValueError(f"asymmetric readout rates unavailable for {self.name}")
        return ReadoutErrorModel.asymmetric(self.e0, self.e1)

    def gate_noise(self) -> GateNoiseModel:
        return GateNoiseModel(self.gamma)


DEVICE_PROFILES: dict[str, DeviceProfile] = {
    p.name: p
    for p in (
        DeviceProfile("zuchongzhi-2.0", gamma=0.006293, xi=0.0452, e0=0.0346, e1=0.0608),
        DeviceProfile("zuchongzhi-2.1", gamma=0.0064, xi=0.0226, e0=0.0148, e1=0.0303),
        DeviceProfile("sycamore-2019", gamma=0.006613, xi=0.038, e0=0.018, e1=0.051),
        DeviceProfile("sycamore-2021", gamma=0.006613, xi=0.019, e0=0.009, e1=0.0255),
        DeviceProfile("h1-2", gamma=0.002453, xi=0.0039, e0=None, e1=None),
    )
}


def device_profile(name: str) -> DeviceProfile:
    try:
        return DEVICE_PROFILES[name.lower()]
    except KeyError:
        known = ", ".join(sorted(DEVICE_PROFILES))
        raise ValueError(f"unknown device profile {name!r} (known: {known})") from None
