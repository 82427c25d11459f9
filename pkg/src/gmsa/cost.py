"""Energy cost of running jobs through a chosen global manager."""

from __future__ import annotations

import numpy as np

from .model import SlotObservation, SystemConfig


def unit_costs(config: SystemConfig, obs: SlotObservation) -> np.ndarray:
    """Per-job cost ``u[i, k]`` when DC ``i`` manages a type-k job.

    The manager spreads the job's tasks over all DCs according to the
    allocation ratio, and each task is billed at the executing DC's
    price-weighted PUE::

        u[i, k] = P[k] * sum_j price[j] * pue[j] * r[k, i, j]
    """
    n, k = config.shape
    if obs.pue.shape != (n,) or obs.price_weight.shape != (n,):
        raise ValueError(f"observation has {obs.pue.shape[0]} DCs, config has {n}")
    site_weight = obs.price_weight * obs.pue  # (N,)
    # (K, N, N) @ (N,) -> (K, N)
    per_manager = config.allocation_ratio @ site_weight
    return per_manager.T * config.it_power_per_job[None, :]


def slot_cost(config: SystemConfig, obs: SlotObservation, decision, unit=None) -> float:
    """Total cost of one slot: ``sum_k sum_i f[i, k] * A[k] * u[i, k]``."""
    if unit is None:
        unit = unit_costs(config, obs)
    f = np.asarray(decision, dtype=float)
    if f.shape != unit.shape:
        raise ValueError(f"decision has shape {f.shape}, expected {unit.shape}")
    return float(np.sum(f * obs.arrivals[None, :] * unit))
