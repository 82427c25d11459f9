"""Scenario documents: one JSON (or YAML) file describing a whole experiment.

Top-level keys::

    system      SystemConfig fields; ``allocation_ratio`` may be omitted when
                ``generator.ratio`` says how to build it
    generator   GeneratorSpec fields (arrival, service, pue, price, ratio, seed)
    horizon     number of slots (default 288, one day of 5-minute slots)
    v_values    list of V values for sweeps
    schedulers  scheduler names (gmsa, data, random)
    tie_break   GMSA tie rule
    replications  runs per sweep cell, seeds seed, seed+1, ...
    output_dir  where results go

Relative ``path`` entries inside the generator are resolved against the
scenario file's directory.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from .generators import DAY_SLOTS, GeneratorSpec, SpecError, generate_observations, generate_ratios
from .model import SystemConfig, ValidationReport
from .schedulers import SCHEDULERS, TIE_BREAKS
from .validation import validate_config, validate_observation

MONTH_SLOTS = 30 * DAY_SLOTS
JOBS_PER_MONTH = 350_000


class ScenarioError(ValueError):
    pass


@dataclass
class Scenario:
    system: dict
    generator: GeneratorSpec
    horizon: int = DAY_SLOTS
    v_values: list[float] = field(default_factory=lambda: [1.0])
    schedulers: list[str] = field(default_factory=lambda: ["gmsa"])
    tie_break: str = "lowest_index"
    replications: int = 1
    output_dir: str = "results"

    def build_config(self) -> SystemConfig:
        """SystemConfig with allocation ratios filled in from the generator if needed."""
        system = dict(self.system)
        has_ratio = "allocation_ratio" in system
        has_gen = bool(self.generator.ratio)
        if has_ratio and has_gen:
            raise ScenarioError("give either system.allocation_ratio or generator.ratio, not both")
        if not has_ratio and not has_gen:
            raise ScenarioError("missing allocation ratios: set system.allocation_ratio or generator.ratio")
        if has_gen:
            n, k = int(system["num_dcs"]), int(system["num_job_types"])
            system["allocation_ratio"] = np.zeros((k, n, n)).tolist()
            base = SystemConfig.from_dict(system)
            return base.with_ratios(generate_ratios(self.generator, base))
        return SystemConfig.from_dict(system)

    def to_dict(self) -> dict:
        return {
            "system": copy.deepcopy(self.system),
            "generator": copy.deepcopy(self.generator.to_dict()),
            "horizon": self.horizon,
            "v_values": list(self.v_values),
            "schedulers": list(self.schedulers),
            "tie_break": self.tie_break,
            "replications": self.replications,
            "output_dir": self.output_dir,
        }

    @classmethod
    def from_dict(cls, data: dict, base_dir: Path | None = None) -> "Scenario":
        try:
            gen = copy.deepcopy(data["generator"])
            system = copy.deepcopy(data["system"])
        except KeyError as exc:
            raise ScenarioError(f"scenario is missing section {exc.args[0]!r}") from None
        if base_dir is not None:
            for key in ("pue", "price", "ratio"):
                section = gen.get(key) or {}
                if "path" in section and not Path(section["path"]).is_absolute():
                    section["path"] = str(Path(base_dir) / section["path"])
        try:
            scenario = cls(
                system=system,
                generator=GeneratorSpec.from_dict(gen),
                horizon=int(data.get("horizon", DAY_SLOTS)),
                v_values=[float(v) for v in data.get("v_values", [1.0])],
                schedulers=list(data.get("schedulers", ["gmsa"])),
                tie_break=str(data.get("tie_break", "lowest_index")),
                replications=int(data.get("replications", 1)),
                output_dir=str(data.get("output_dir", "results")),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ScenarioError(f"malformed scenario: {exc}") from None
        return scenario


def load_scenario(path) -> Scenario:
    """Parse a scenario file. I/O problems raise ``OSError``; bad content ``ScenarioError``."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        if path.suffix.lower() in (".yaml", ".yml"):
            data = yaml.safe_load(text)
        else:
            data = json.loads(text)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise ScenarioError(f"cannot parse {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ScenarioError(f"{path}: top level must be a mapping")
    return Scenario.from_dict(data, base_dir=path.parent)


def dump_scenario(scenario: Scenario, path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(scenario.to_dict(), indent=2) + "\n", encoding="utf-8")
    return path


def validate_scenario(scenario: Scenario) -> tuple[SystemConfig | None, ValidationReport]:
    """Check config invariants, scenario fields and every generated observation."""
    report = ValidationReport()
    try:
        config = scenario.build_config()
    except (ScenarioError, SpecError, KeyError, TypeError, ValueError) as exc:
        report.add("shape", "system", (), None, f"cannot build system config: {exc}")
        return None, report
    report.violations.extend(validate_config(config).violations)

    if scenario.horizon < 1:
        report.add("range", "horizon", (), scenario.horizon, f"horizon must be positive, got {scenario.horizon}")
    if not scenario.v_values:
        report.add("range", "v_values", (), [], "v_values must be non-empty")
    for v in scenario.v_values:
        if not v >= 0:
            report.add("range", "v_values", (), v, f"V must be non-negative, got {v}")
    for name in scenario.schedulers:
        if name not in SCHEDULERS:
            report.add("range", "schedulers", (), name, f"unknown scheduler {name!r}")
    if scenario.tie_break not in TIE_BREAKS:
        report.add("range", "tie_break", (), scenario.tie_break, f"unknown tie_break {scenario.tie_break!r}")
    if scenario.replications < 1:
        report.add("range", "replications", (), scenario.replications, "replications must be positive")
    if not report.ok:
        return config, report

    try:
        observations = generate_observations(scenario.generator, config, scenario.horizon)
    except (SpecError, KeyError, TypeError, ValueError) as exc:
        report.add("range", "generator", (), None, f"invalid generator spec: {exc}")
        return config, report
    for obs in observations:
        for v in validate_observation(obs, config).violations:
            report.add(v.kind, v.field, (obs.slot_index,) + v.index, v.value,
                       f"slot {obs.slot_index}: {v.message}")
    return config, report


DC_IDS = ["prineville", "forest_city", "lulea", "altoona"]


def reference_scenario(seed: int = 1) -> Scenario:
    """Four DCs, one job type, one day of 5-minute slots.

    Arrivals are Poisson at 350K jobs per 30-day month (about 40.5 per slot).
    DC service capacities are about [60, 55, 30, 25] jobs per slot, +-20%;
    the two small sites are also the cheapest (roughly 3x cheaper power).
    """
    capacity = np.array([60, 55, 30, 25])
    return Scenario(
        system={
            "num_dcs": 4,
            "num_job_types": 1,
            "dc_ids": list(DC_IDS),
            "it_power_per_job": [1.0],
            "arrival_bound": [120.0],
            "service_bound": [80.0],
            "dataset_distribution": [[0.4, 0.3, 0.2, 0.1]],
        },
        generator=GeneratorSpec(
            arrival={"kind": "poisson", "rate_per_slot": [JOBS_PER_MONTH / MONTH_SLOTS], "truncation": [120.0]},
            service={
                "kind": "uniform_integer",
                "low": np.round(capacity * 0.8)[:, None].tolist(),
                "high": np.round(capacity * 1.2)[:, None].tolist(),
                "truncation": [80.0],
            },
            pue={
                "kind": "sinusoidal_diurnal",
                "mean": [1.35, 1.30, 1.10, 1.20],
                "amplitude": [0.20, 0.15, 0.05, 0.10],
                "phase": [0, 36, 144, 12],
                "period": DAY_SLOTS,
            },
            price={
                "kind": "step_schedule",
                "schedule": [
                    [[0, 9.0], [96, 14.0], [240, 9.0]],
                    [[0, 8.0], [120, 12.0], [264, 8.0]],
                    [[0, 3.0], [144, 4.0]],
                    [[0, 5.0], [108, 6.0]],
                ],
                "period": DAY_SLOTS,
            },
            ratio={"kind": "manager_local", "locality": 0.5},
            seed=seed,
        ),
        horizon=DAY_SLOTS,
        v_values=[0.001, 0.01, 0.1, 1.0, 10.0, 100.0],
        schedulers=["gmsa", "data", "random"],
        replications=1,
        output_dir="results",
    )


def imbalanced_scenario(seed: int = 1) -> Scenario:
    """Reference scenario with the largest data holder shrunk to ~25% of load.

    DC 0 stores 40% of the data but serves only 8-12 jobs per slot, so the
    data-proportional split overloads it.
    """
    scenario = reference_scenario(seed)
    low = scenario.generator.service["low"]
    high = scenario.generator.service["high"]
    low[0], high[0] = [8.0], [12.0]
    return scenario
