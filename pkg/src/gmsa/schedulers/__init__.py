from .base import BaseScheduler
from .baselines import DataScheduler, RandomScheduler, decide_data, decide_random
from .gmsa import (
    TIE_BREAKS,
    GMSAScheduler,
    build_coefficients,
    decide,
    drift_plus_penalty_value,
    lp_oracle,
)

SCHEDULERS = {
    "gmsa": GMSAScheduler,
    "data": DataScheduler,
    "random": RandomScheduler,
}


def make_scheduler(name: str, **params) -> BaseScheduler:
    """Build a scheduler by name, dropping params it does not accept."""
    try:
        cls = SCHEDULERS[name]
    except KeyError:
        raise ValueError(f"unknown scheduler {name!r}; choose from {sorted(SCHEDULERS)}") from None
    accepted = cls._get_param_names()
    return cls(**{k: v for k, v in params.items() if k in accepted})


__all__ = [
    "BaseScheduler",
    "DataScheduler",
    "GMSAScheduler",
    "RandomScheduler",
    "SCHEDULERS",
    "TIE_BREAKS",
    "build_coefficients",
    "decide",
    "decide_data",
    "decide_random",
    "drift_plus_penalty_value",
    "lp_oracle",
    "make_scheduler",
]
