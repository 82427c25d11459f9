"""Drift-plus-penalty global manager selection.

Each slot minimizes, over column-stochastic ``f``,

    sum_ik [ f[i,k] A[k] (Q[i,k] - mu[i,k]) - Q[i,k] mu[i,k] ] + V * Cost(f)

The objective is linear in ``f`` and the feasible set is a product of K
simplices, so the optimum sits at a vertex: every type goes wholly to the DC
with the smallest coefficient ``A[k] * (Q[i,k] - mu[i,k] + V u[i,k])``.
"""

from __future__ import annotations

import numpy as np

from ..model import SlotObservation
from .base import BaseScheduler

TIE_BREAKS = ("lowest_index", "lowest_unit_cost")


def build_coefficients(state, obs: SlotObservation, unit, v: float) -> np.ndarray:
    q = np.asarray(state, dtype=float)
    u = np.asarray(unit, dtype=float)
    return obs.arrivals[None, :] * ((q - obs.service_rates) + v * u)


def decide(coeffs, tie_break: str = "lowest_index", unit=None) -> np.ndarray:
    c = np.asarray(coeffs, dtype=float)
    if not np.all(np.isfinite(c)):
        raise ValueError("coefficients must be finite")
    n, k = c.shape
    if tie_break == "lowest_index":
        chosen = np.argmin(c, axis=0)
    elif tie_break == "lowest_unit_cost":
        if unit is None:
            raise ValueError("tie_break='lowest_unit_cost' needs the unit cost matrix")
        u = np.asarray(unit, dtype=float)
        chosen = np.empty(k, dtype=int)
        for col in range(k):
            tied = np.flatnonzero(c[:, col] == c[:, col].min())
            # argmin keeps the lowest index among equal unit costs
            chosen[col] = tied[np.argmin(u[tied, col])]
    else:
        raise ValueError(f"unknown tie_break {tie_break!r}; expected one of {TIE_BREAKS}")
    f = np.zeros((n, k))
    f[chosen, np.arange(k)] = 1.0
    return f


def lp_oracle(coeffs) -> np.ndarray:
    """Exact per-slot LP optimum by enumerating every simplex vertex.

    Test oracle: cost is O(N^2 K), meant for small N.
    """
    c = np.asarray(coeffs, dtype=float)
    n, k = c.shape
    f = np.zeros((n, k))
    for col in range(k):
        best_vertex, best_value = None, None
        for i in range(n):
            vertex = np.zeros(n)
            vertex[i] = 1.0
            value = float(vertex @ c[:, col])
            if best_value is None or value < best_value:
                best_vertex, best_value = i, value
        f[best_vertex, col] = 1.0
    return f


def drift_plus_penalty_value(state, obs: SlotObservation, unit, decision, v: float) -> float:
    q = np.asarray(state, dtype=float)
    f = np.asarray(decision, dtype=float)
    u = np.asarray(unit, dtype=float)
    mu = obs.service_rates
    drift_part = np.sum(f * obs.arrivals[None, :] * (q - mu) - q * mu)
    cost = float(np.sum(f * obs.arrivals[None, :] * u))
    return float(drift_part) + v * cost


class GMSAScheduler(BaseScheduler):
    """Greedy drift-plus-penalty manager selection.

    Parameters
    ----------
    v : float, default=1.0
        Cost/backlog tradeoff weight. ``v=0`` ignores cost entirely; large
        ``v`` approaches the cheapest manager at the price of longer queues.
    tie_break : {"lowest_index", "lowest_unit_cost"}
        Rule among DCs with equal coefficients.
    """

    name = "gmsa"
    uses_v = True

    def __init__(self, v=1.0, tie_break="lowest_index"):
        self.v = v
        self.tie_break = tie_break

    def fit(self, config, y=None):
        if not self.v >= 0:
            raise ValueError(f"v must be non-negative, got {self.v}")
        if self.tie_break not in TIE_BREAKS:
            raise ValueError(f"unknown tie_break {self.tie_break!r}")
        return super().fit(config)

    def coefficients(self, state, obs, unit=None) -> np.ndarray:
        return build_coefficients(state, obs, self._unit(obs, unit), self.v)

    def predict(self, state, obs, unit=None):
        u = self._unit(obs, unit)
        return decide(build_coefficients(state, obs, u, self.v), self.tie_break, u)

    def score_decision(self, state, obs, decision, unit=None) -> float:
        """Drift-plus-penalty objective of ``decision`` (lower is better)."""
        return drift_plus_penalty_value(state, obs, self._unit(obs, unit), decision, self.v)

