from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ..cost import unit_costs
from ..model import SlotObservation, SystemConfig
from ..validation import check_config


class BaseScheduler(BaseEstimator):
    """Per-slot global-manager policy.

    ``fit(config)`` binds the policy to a system; ``predict(state, obs)`` returns
    the ``(N, K)`` decision matrix for one slot. Hyperparameters are constructor
    arguments, so ``get_params``/``set_params``/``sklearn.base.clone`` work as
    for any estimator.
    """

    name = "base"
    uses_v = False

    def fit(self, config: SystemConfig, y=None):
        self.config_ = check_config(config)
        self.n_dcs_, self.n_job_types_ = config.shape
        return self

    def predict(self, state, obs: SlotObservation, unit=None) -> np.ndarray:
        raise NotImplementedError

    def _unit(self, obs, unit):
        check_is_fitted(self, "config_")
        return unit_costs(self.config_, obs) if unit is None else np.asarray(unit, dtype=float)
