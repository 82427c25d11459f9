"""Domain types shared by the cost model, queue engine, schedulers and harness.

Matrices indexed by (data center, job type) are plain ``numpy`` arrays of
shape ``(N, K)``:

* queue state ``Q[i, k]``: backlog of type-k jobs managed by DC i (fluid, real valued)
* decision ``f[i, k]``: fraction of type-k arrivals whose manager is DC i;
  every column sums to one
* unit costs ``u[i, k]``: cost of one type-k job when DC i is its manager

Only the two records that bundle heterogeneous fields get their own classes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

SUM_TOL = 1e-9


def _frozen(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SystemConfig:
    """Static description of the data centers and job types.

    ``allocation_ratio[k, i, j]`` is the fraction of a type-k job's tasks that
    manager ``i`` sends to DC ``j``; ``dataset_distribution[k, j]`` is the share
    of type-k data stored at DC ``j``.
    """

    num_dcs: int
    num_job_types: int
    dc_ids: tuple[str, ...]
    it_power_per_job: np.ndarray
    arrival_bound: np.ndarray
    service_bound: np.ndarray
    allocation_ratio: np.ndarray
    dataset_distribution: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "dc_ids", tuple(str(d) for d in self.dc_ids))
        for name in ("it_power_per_job", "arrival_bound", "service_bound",
                     "allocation_ratio", "dataset_distribution"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))

    @classmethod
    def from_dict(cls, data: dict) -> "SystemConfig":
        return cls(
            num_dcs=int(data["num_dcs"]),
            num_job_types=int(data["num_job_types"]),
            dc_ids=data.get("dc_ids") or [f"dc{i}" for i in range(int(data["num_dcs"]))],
            it_power_per_job=data["it_power_per_job"],
            arrival_bound=data["arrival_bound"],
            service_bound=data["service_bound"],
            allocation_ratio=data["allocation_ratio"],
            dataset_distribution=data["dataset_distribution"],
        )

    def to_dict(self) -> dict:
        return {
            "num_dcs": self.num_dcs,
            "num_job_types": self.num_job_types,
            "dc_ids": list(self.dc_ids),
            "it_power_per_job": self.it_power_per_job.tolist(),
            "arrival_bound": self.arrival_bound.tolist(),
            "service_bound": self.service_bound.tolist(),
            "allocation_ratio": self.allocation_ratio.tolist(),
            "dataset_distribution": self.dataset_distribution.tolist(),
        }

    def with_ratios(self, allocation_ratio) -> "SystemConfig":
        d = self.to_dict()
        d["allocation_ratio"] = np.asarray(allocation_ratio, dtype=float).tolist()
        return SystemConfig.from_dict(d)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.num_dcs, self.num_job_types)


@dataclass(frozen=True, eq=False)
class SlotObservation:
    """Everything random that is revealed at the start of slot ``slot_index``."""

    slot_index: int
    arrivals: np.ndarray       # (K,)
    service_rates: np.ndarray  # (N, K)
    pue: np.ndarray            # (N,)
    price_weight: np.ndarray   # (N,)

    def __post_init__(self):
        object.__setattr__(self, "slot_index", int(self.slot_index))
        for name in ("arrivals", "service_rates", "pue", "price_weight"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))


@dataclass(frozen=True)
class Violation:
    """One failed invariant. ``kind`` is ``"shape"``, ``"range"`` or ``"sum"``."""

    kind: str
    field: str
    index: tuple
    value: object
    message: str

    def __str__(self):
        return self.message


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def add(self, kind, field_name, index, value, message):
        self.violations.append(Violation(kind, field_name, tuple(index), value, message))

    def messages(self) -> list[str]:
        return [v.message for v in self.violations]


def zero_state(config: SystemConfig) -> np.ndarray:
    return np.zeros(config.shape)


def stack_observations(observations: Sequence[SlotObservation]) -> dict[str, np.ndarray]:
    """Stack a sequence into ``(T, ...)`` arrays, convenient for statistics."""
    return {
        "arrivals": np.stack([o.arrivals for o in observations]),
        "service_rates": np.stack([o.service_rates for o in observations]),
        "pue": np.stack([o.pue for o in observations]),
        "price_weight": np.stack([o.price_weight for o in observations]),
    }
