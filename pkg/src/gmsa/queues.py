"""Queue dynamics, backlog statistics and the quadratic Lyapunov bound."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .model import SlotObservation, SystemConfig


@dataclass(frozen=True)
class BacklogStats:
    slot_total: float
    running_time_average: float


def advance_queues(state, decision, obs: SlotObservation) -> np.ndarray:
    """One slot of ``Q(t+1) = max(Q(t) + f(t) A(t) - mu(t), 0)``, entrywise.

    Returns a new array; ``state`` is left untouched.
    """
    q = np.asarray(state, dtype=float)
    admitted = np.asarray(decision, dtype=float) * obs.arrivals[None, :]
    return np.maximum(q + admitted - obs.service_rates, 0.0)


def backlog_stats(history: Sequence) -> BacklogStats:
    if len(history) == 0:
        raise ValueError("backlog_stats needs at least one queue state")
    totals = [float(np.sum(q)) for q in history]
    return BacklogStats(slot_total=totals[-1], running_time_average=sum(totals) / len(totals))


def lyapunov(state) -> float:
    """``L = 0.5 * sum Q**2``."""
    q = np.asarray(state, dtype=float)
    return 0.5 * float(np.sum(q * q))


def slot_drift_constant(decision, obs: SlotObservation) -> float:
    """Realized ``0.5 * sum[(f A)**2 + mu**2]`` for one slot."""
    admitted = np.asarray(decision, dtype=float) * obs.arrivals[None, :]
    return 0.5 * float(np.sum(admitted ** 2) + np.sum(obs.service_rates ** 2))


def drift_constant(config: SystemConfig) -> float:
    """Worst-case ``B = N/2 * sum_k (A_max**2 + mu_max**2)``."""
    n = config.num_dcs
    return 0.5 * n * float(np.sum(config.arrival_bound ** 2)) + 0.5 * n * float(np.sum(config.service_bound ** 2))


@dataclass(frozen=True)
class DriftCheck:
    increment: float   # L(t+1) - L(t)
    bound: float       # B_hat(t) + sum Q (fA - mu)
    slot_constant: float
    constant: float

    def drift_ok(self, rtol: float = 1e-6) -> bool:
        scale = max(1.0, abs(self.increment), abs(self.bound))
        return self.increment <= self.bound + rtol * scale

    def constant_ok(self) -> bool:
        return self.slot_constant <= self.constant


def check_drift(state, next_state, decision, obs: SlotObservation, config: SystemConfig) -> DriftCheck:
    """Evaluate both sides of the per-slot drift inequality for one realization."""
    q = np.asarray(state, dtype=float)
    admitted = np.asarray(decision, dtype=float) * obs.arrivals[None, :]
    slot_b = slot_drift_constant(decision, obs)
    return DriftCheck(
        increment=lyapunov(next_state) - lyapunov(q),
        bound=slot_b + float(np.sum(q * (admitted - obs.service_rates))),
        slot_constant=slot_b,
        constant=drift_constant(config),
    )
