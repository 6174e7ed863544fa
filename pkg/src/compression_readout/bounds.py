"""Shot-budget and error-bound calculators.

These are the closed forms that the sampled engines are tested against: the
Chernoff shot budget sufficient for per-population accuracy epsilon at
failure probability eta, the uniform variance bound on the decoded outputs,
and the exact direct-readout error for basis states.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .noise import ReadoutErrorModel


@dataclass(frozen=True)
class BudgetQuery:
    epsilon: float
    eta: float
    m: int

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError(f"epsilon={self.epsilon!r} outside (0, 1)")
        if not 0.0 < self.eta < 1.0:
            raise ValueError(f"eta={self.eta!r} outside (0, 1)")
        if self.m < 1:
            raise ValueError("grid count must be >= 1")


def chernoff_shot_budget(query: BudgetQuery) -> int:
    """Sufficient shots per grid point for P(|p_i - w_i| >= eps) <= eta.

    ceil of (48 m^2 + 4 m (2m+1) eps) / ((2m+1)^2 eps^2) * ln(m / eta);
    natural log, rounded up because shots are whole.
    """
    m, eps, eta = query.m, query.epsilon, query.eta
    L = 2 * m + 1
    factor = (48.0 * m * m + 4.0 * m * L * eps) / (L * L * eps * eps)
    return math.ceil(factor * math.log(m / eta))


def total_budget(query: BudgetQuery) -> int:
    """Total shots m * N for the per-grid budget of :func:`chernoff_shot_budget`."""
    return query.m * chernoff_shot_budget(query)


def variance_bound(m: int, shots_per_grid: int) -> float:
    """Uniform upper bound 16 m / ((2m+1)^2 N) on Var(p_i), any i."""
    if m < 1:
        raise ValueError("grid count must be >= 1")
    if shots_per_grid < 1:
        raise ValueError("need at least one shot per grid point")
    L = 2 * m + 1
    return 16.0 * m / (L * L * shots_per_grid)


def direct_error_closed_form(n: int, readout: ReadoutErrorModel, basis_index: int) -> float:
    """Exact infinite-shot direct-readout error for a basis state.

    Symmetric rates: 1 - (1-xi)^n for any index.  Asymmetric rates are only
    closed-form here for the all-zeros and all-ones states; anything else
    should be evaluated through the engine.
    """
    if n < 1:
        raise ValueError("qubit count must be >= 1")
    if not 0 <= basis_index < (1 << n):
        raise ValueError(f"basis index {basis_index} out of range for n={n}")
    if readout.is_symmetric:
        return 1.0 - (1.0 - readout.xi) ** n
    if basis_index == 0:
        return 1.0 - (1.0 - readout.e0) ** n
    if basis_index == (1 << n) - 1:
        return 1.0 - (1.0 - readout.e1) ** n
    raise ValueError(
        "no closed form for a mixed-bit basis state under asymmetric readout; "
        "use direct_readout_exact"
    )


def direct_error_binomial_sum(n: int, xi: float) -> float:
    """The same symmetric-rate error written as the explicit binomial sum

        (1/2) (1 - (1-xi)^n + sum_{k=1..n} C(n,k) (1-xi)^(n-k) xi^k),

    kept as an independently evaluable cross-check of the closed form.
    """
    if n < 1:
        raise ValueError("qubit count must be >= 1")
    tail = sum(
        math.comb(n, k) * (1.0 - xi) ** (n - k) * xi**k for k in range(1, n + 1)
    )
    return 0.5 * (1.0 - (1.0 - xi) ** n + tail)
