"""Encoding-circuit plans and their statevector validation.

Three plan flavors:

* ``fully_connected``: one controlled rotation per data qubit, each acting
  directly on the ancilla with half-angle 2^j * x, so basis state |i> turns
  the ancilla by i*x in total.
* ``nearest_neighbor``: the same rotations compiled to a linear chain by
  walking the ancilla: rotate with the adjacent data qubit, swap the ancilla
  one site down, repeat.  n rotations + (n-1) swaps = 2n-1 two-qubit gates.
* ``paper_count``: no gate list, only the published compiled-circuit budget
  of n(n+1)/2 two-qubit gates at depth <= 2n, for noise accounting.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .states import AmplitudeState

ARCHITECTURES = ("fully_connected", "nearest_neighbor", "paper_count")

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Gate:
    kind: str  # "crot" | "swap"
    qubits: tuple[int, int]  # (control, target) for crot; unordered for swap
    angle: float | None = None  # crot half-angle, radians


@dataclass(frozen=True)
class CircuitPlan:
    architecture: str
    n: int
    x: float
    gates: tuple[Gate, ...]
    two_qubit_count: int
    depth: int
    ancilla_wire: int  # wire holding the ancilla state after all gates

    def to_dict(self) -> dict:
        return {
            "architecture": self.architecture,
            "n": self.n,
            "x": self.x,
            "two_qubit_count": self.two_qubit_count,
            "depth": self.depth,
            "ancilla_wire": self.ancilla_wire,
            "gates": [
                {"kind": g.kind, "qubits": list(g.qubits), "angle": g.angle}
                for g in self.gates
            ],
        }


def gate_count(architecture: str, n: int) -> int:
    if architecture == "fully_connected":
        return n
    if architecture == "nearest_neighbor":
        return 2 * n - 1
    if architecture == "paper_count":
        return n * (n + 1) // 2
    raise ValueError(f"unknown architecture {architecture!r}")


def build_encoding_circuit(n: int, x: float, architecture: str) -> CircuitPlan:
    """Plan the encoding circuit for n data qubits (ancilla is wire n)."""
    if n < 1:
        raise ValueError("qubit count must be >= 1")
    if architecture == "paper_count":
        return CircuitPlan(architecture, n, x, (), n * (n + 1) // 2, 2 * n, n)

    # Half-angles 2^j * x, reduced mod 2pi before emission; the accumulated
    # rotation i*x is 2pi-periodic so this loses nothing.
    angles = [math.fmod((1 << j) * x, _TWO_PI) for j in range(n)]

    if architecture == "fully_connected":
        gates = tuple(Gate("crot", (j, n), angles[j]) for j in range(n))
        return CircuitPlan(architecture, n, x, gates, n, n, n)

    if architecture == "nearest_neighbor":
        gates: list[Gate] = []
        anc = n
        for j in range(n - 1, -1, -1):
            gates.append(Gate("crot", (j, anc), angles[j]))
            if j > 0:
                gates.append(Gate("swap", (j, anc)))
                anc = j
        return CircuitPlan(architecture, n, x, tuple(gates), 2 * n - 1, 2 * n - 1, anc)

    raise ValueError(f"unknown architecture {architecture!r}")


def _axis(wire: int, nwires: int) -> int:
    # Wire w carries bit weight 2^w; C-order reshape puts the most significant
    # bit on axis 0.
    return nwires - 1 - wire


def simulate_circuit_ancilla(state: AmplitudeState, plan: CircuitPlan) -> float:
    """Run the gate list on |psi>|0> and return the ancilla's |0> probability."""
    if plan.architecture == "paper_count":
        raise ValueError("paper_count plans carry no gates to simulate")
    if state.n != plan.n:
        raise ValueError("state and plan disagree on qubit count")
    nwires = plan.n + 1
    joint = np.zeros(1 << nwires, dtype=np.complex128)
    joint[: state.amplitudes.size] = state.amplitudes  # ancilla (wire n) in |0>
    t = joint.reshape([2] * nwires)

    for gate in plan.gates:
        if gate.kind == "crot":
            c, tg = gate.qubits
            ac, at = _axis(c, nwires), _axis(tg, nwires)
            sub = [slice(None)] * nwires
            sub[ac] = 1
            sub0, sub1 = list(sub), list(sub)
            sub0[at], sub1[at] = 0, 1
            s0, s1 = tuple(sub0), tuple(sub1)
            cos_a, sin_a = math.cos(gate.angle), math.sin(gate.angle)
            v0 = t[s0].copy()
            v1 = t[s1].copy()
            t[s0] = cos_a * v0 - sin_a * v1
            t[s1] = sin_a * v0 + cos_a * v1
        elif gate.kind == "swap":
            a, b = (_axis(q, nwires) for q in gate.qubits)
            t = np.swapaxes(t, a, b).copy()
        else:
            raise ValueError(f"unknown gate kind {gate.kind!r}")

    probs = np.abs(t) ** 2
    keep = _axis(plan.ancilla_wire, nwires)
    marginal = probs.sum(axis=tuple(a for a in range(nwires) if a != keep))
    return float(marginal[0])
