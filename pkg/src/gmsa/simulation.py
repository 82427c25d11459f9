"""Slot-loop driver, metrics and V-sweeps."""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np
from sklearn.base import clone

from .cost import slot_cost, unit_costs
from .generators import POLICY_STREAM, GeneratorSpec, generate_observations
from .model import SlotObservation, SystemConfig, zero_state
from .queues import advance_queues, check_drift
from .schedulers import BaseScheduler, drift_plus_penalty_value, make_scheduler
from .validation import check_config, check_decision, validate_observation

PER_SLOT_COLUMNS = ("slot", "cost", "total_backlog", "drift_plus_penalty")
SUMMARY_COLUMNS = ("scheduler", "v", "time_average_cost", "time_average_backlog")
DRIFT_RTOL = 1e-6


class SimulationError(RuntimeError):
    """A per-slot invariant failed; ``slot`` names where."""

    def __init__(self, slot: int, message: str):
        self.slot = slot
        super().__init__(f"slot {slot}: {message}")


@dataclass(eq=False)
class SimulationRecord:
    scheduler_name: str
    v: float
    seed: int | None
    slots: np.ndarray
    cost: np.ndarray
    total_backlog: np.ndarray  # backlog left at the end of each slot
    drift_plus_penalty: np.ndarray
    total_cost: float
    time_average_cost: float
    time_average_backlog: float
    observation_digest: str = ""

    @property
    def horizon(self) -> int:
        return len(self.slots)

    def per_slot(self) -> list[dict]:
        return [
            {"slot": int(t), "cost": float(c), "total_backlog": float(b), "drift_plus_penalty": float(d)}
            for t, c, b, d in zip(self.slots, self.cost, self.total_backlog, self.drift_plus_penalty)
        ]

    def quarter_means(self) -> tuple[float, float]:
        """Mean total backlog over the second and the last quarter of the run."""
        q = self.horizon // 4
        if q == 0:
            raise ValueError("horizon too short for quarter statistics")
        second = float(np.mean(self.total_backlog[q:2 * q]))
        last = float(np.mean(self.total_backlog[self.horizon - q:]))
        return second, last

    def summary(self) -> dict:
        return {
            "scheduler": self.scheduler_name,
            "v": self.v,
            "seed": self.seed,
            "horizon": self.horizon,
            "time_average_cost": self.time_average_cost,
            "time_average_backlog": self.time_average_backlog,
            "total_cost": self.total_cost,
            "observation_digest": self.observation_digest,
        }


def observation_digest(observations: Sequence[SlotObservation]) -> str:
    h = hashlib.sha256()
    for o in observations:
        h.update(np.int64(o.slot_index).tobytes())
        for arr in (o.arrivals, o.service_rates, o.pue, o.price_weight):
            h.update(np.ascontiguousarray(arr, dtype=np.float64).tobytes())
    return h.hexdigest()


def policy_seed(seed: int) -> int:
    """Seed for a randomized policy, independent of the observation stream."""
    return int(np.random.SeedSequence([int(seed), POLICY_STREAM]).generate_state(1, np.uint64)[0])


def _prepare(scheduler, config, seed):
    if isinstance(scheduler, str):
        scheduler = make_scheduler(scheduler)
    est = clone(scheduler)
    params = est.get_params()
    if "random_state" in params and params["random_state"] is None and seed is not None:
        est.set_params(random_state=policy_seed(seed))
    return est.fit(config)


def run_simulation(config: SystemConfig, observations: Sequence[SlotObservation],
                   scheduler: BaseScheduler | str, seed: int | None = None,
                   check_invariants: bool = True) -> SimulationRecord:
    """Run observe, decide, account, update for every slot, starting from empty queues.

    ``scheduler`` is cloned before fitting, so the caller's instance is never
    mutated. Any invariant failure raises :class:`SimulationError`.
    """
    if len(observations) == 0:
        raise ValueError("need at least one observation")
    check_config(config)
    est = _prepare(scheduler, config, seed)
    v = float(est.v) if est.uses_v else 0.0
    shape = config.shape

    q = zero_state(config)
    horizon = len(observations)
    costs = np.empty(horizon)
    backlog = np.empty(horizon)
    dpp = np.empty(horizon)
    total_cost = 0.0
    for t, obs in enumerate(observations):
        if check_invariants:
            report = validate_observation(obs, config)
            if not report.ok:
                raise SimulationError(t, "; ".join(report.messages()))
        unit = unit_costs(config, obs)
        f = est.predict(q, obs, unit)
        try:
            f = check_decision(f, shape)
        except ValueError as exc:
            raise SimulationError(t, f"{est.name} produced an invalid decision: {exc}") from None
        costs[t] = slot_cost(config, obs, f, unit)
        total_cost += float(costs[t])
        dpp[t] = drift_plus_penalty_value(q, obs, unit, f, v)
        q_next = advance_queues(q, f, obs)
        if check_invariants:
            if np.any(q_next < 0):
                raise SimulationError(t, "negative backlog after queue update")
            drift = check_drift(q, q_next, f, obs, config)
            if not drift.drift_ok(DRIFT_RTOL):
                raise SimulationError(t, f"drift {drift.increment!r} exceeds bound {drift.bound!r}")
            if not drift.constant_ok():
                raise SimulationError(t, f"slot constant {drift.slot_constant!r} exceeds B={drift.constant!r}")
        backlog[t] = float(np.sum(q_next))
        q = q_next

    return SimulationRecord(
        scheduler_name=est.name,
        v=v,
        seed=seed,
        slots=np.arange(horizon),
        cost=costs,
        total_backlog=backlog,
        drift_plus_penalty=dpp,
        total_cost=total_cost,
        time_average_cost=total_cost / horizon,
        time_average_backlog=float(np.sum(backlog)) / horizon,
        observation_digest=observation_digest(observations),
    )


@dataclass(frozen=True)
class SweepEntry:
    scheduler: str
    v: float
    time_average_cost: float
    time_average_backlog: float
    replications: int


@dataclass
class SweepResult:
    entries: list[SweepEntry]
    records: list[SimulationRecord] = field(default_factory=list, repr=False)

    def get(self, scheduler: str, v: float) -> SweepEntry:
        for e in self.entries:
            if e.scheduler == scheduler and e.v == v:
                return e
        raise KeyError((scheduler, v))

    def rows(self) -> list[dict]:
        return [{"scheduler": e.scheduler, "v": e.v, "time_average_cost": e.time_average_cost,
                 "time_average_backlog": e.time_average_backlog} for e in self.entries]


def replication_seeds(seed: int, replications: int) -> list[int]:
    return [int(seed) + r for r in range(replications)]


def run_sweep(config: SystemConfig, spec: GeneratorSpec, horizon: int, v_values: Sequence[float],
              schedulers: Sequence[str | BaseScheduler] = ("gmsa",), replications: int = 1,
              tie_break: str = "lowest_index", keep_records: bool = False) -> SweepResult:
    """Run every (scheduler, V) on shared observation sequences and average.

    Replication ``r`` uses seed ``spec.seed + r``; inside a replication every
    run sees the identical observations. V-independent schedulers run once per
    replication and their result is repeated for every V.
    """
    v_values = [float(v) for v in v_values]
    if not v_values:
        raise ValueError("v_values must be non-empty")
    if replications < 1:
        raise ValueError("replications must be positive")
    estimators = [make_scheduler(s, tie_break=tie_break) if isinstance(s, str) else s for s in schedulers]

    sums: dict[tuple[str, float], np.ndarray] = {}
    kept = []
    for seed in replication_seeds(spec.seed, replications):
        observations = generate_observations(replace(spec, seed=seed), config, horizon)
        digests = set()
        for est in estimators:
            if est.uses_v:
                runs = [(v, run_simulation(config, observations, clone(est).set_params(v=v), seed=seed))
                        for v in v_values]
            else:
                rec = run_simulation(config, observations, est, seed=seed)
                runs = [(v, rec) for v in v_values]
            for v, rec in runs:
                digests.add(rec.observation_digest)
                key = (rec.scheduler_name, v)
                sums.setdefault(key, np.zeros(2))
                sums[key] += (rec.time_average_cost, rec.time_average_backlog)
            if keep_records:
                kept.extend({id(rec): rec for _, rec in runs}.values())
        if len(digests) != 1:
            raise RuntimeError(f"runs for seed {seed} saw different observation sequences")

    entries = [SweepEntry(name, v, float(s[0]) / replications, float(s[1]) / replications, replications)
               for (name, v), s in sums.items()]
    return SweepResult(entries=entries, records=kept)


def _fmt(x) -> str:
    return repr(float(x))


def per_slot_csv(record: SimulationRecord) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(PER_SLOT_COLUMNS)
    for t, c, b, d in zip(record.slots, record.cost, record.total_backlog, record.drift_plus_penalty):
        w.writerow([int(t), _fmt(c), _fmt(b), _fmt(d)])
    return buf.getvalue()


def sweep_csv(result: SweepResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_COLUMNS)
    for e in result.entries:
        w.writerow([e.scheduler, _fmt(e.v), _fmt(e.time_average_cost), _fmt(e.time_average_backlog)])
    return buf.getvalue()


def write_record(record: SimulationRecord, out_dir, stem: str | None = None) -> dict[str, Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = stem or record.scheduler_name
    slots_path = out_dir / f"{stem}_per_slot.csv"
    slots_path.write_text(per_slot_csv(record), encoding="utf-8")
    summary_path = out_dir / f"{stem}_summary.json"
    summary_path.write_text(json.dumps(record.summary(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return {"per_slot": slots_path, "summary": summary_path}


def write_sweep(result: SweepResult, out_dir) -> dict[str, Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / "sweep_summary.csv"
    csv_path.write_text(sweep_csv(result), encoding="utf-8")
    json_path = out_dir / "sweep_summary.json"
    doc = {"entries": [dict(row, replications=e.replications) for row, e in zip(result.rows(), result.entries)]}
    json_path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return {"csv": csv_path, "json": json_path}
