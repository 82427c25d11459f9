"""Cost-oblivious comparison policies."""

from __future__ import annotations

import numpy as np

from ..model import SystemConfig
from .base import BaseScheduler


def decide_data(config: SystemConfig) -> np.ndarray:
    """Split each job type across DCs in proportion to where its data lives."""
    return np.array(config.dataset_distribution, dtype=float).T.copy()


def decide_random(config: SystemConfig, rng: np.random.Generator) -> np.ndarray:
    """Send each job type's whole slot batch to one uniformly drawn DC."""
    n, k = config.shape
    chosen = rng.integers(0, n, size=k)
    f = np.zeros((n, k))
    f[chosen, np.arange(k)] = 1.0
    return f


class DataScheduler(BaseScheduler):
    name = "data"

    def fit(self, config, y=None):
        super().fit(config)
        self.decision_ = decide_data(config)
        return self

    def predict(self, state, obs, unit=None):
        return self.decision_.copy()


class RandomScheduler(BaseScheduler):
    """Uniform random manager per job type and slot.

    ``fit`` (re)creates the random stream from ``random_state``, so refitting
    replays the same decisions.
    """

    name = "random"

    def __init__(self, random_state=None):
        self.random_state = random_state

    def fit(self, config, y=None):
        super().fit(config)
        self.rng_ = np.random.default_rng(self.random_state)
        return self

    def predict(self, state, obs, unit=None):
        return decide_random(self.config_, self.rng_)
