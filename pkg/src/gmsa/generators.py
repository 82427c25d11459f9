"""Synthetic arrival, service, PUE, price and allocation-ratio processes.

All randomness comes from ``numpy.random.Generator`` (PCG64) streams derived
from one 64-bit seed:

* stream ``(seed, 0)``: observations, consumed per slot as arrivals for each
  type, then service rates for each (DC, type) in row-major order
* stream ``(seed, 1)``: allocation ratios

Poisson variates are drawn from uniforms with a fixed algorithm (sequential
inversion below ``POISSON_INVERSION_LIMIT``, Hormann's PTRS transformed
rejection at or above it), so sequences depend only on the seed and the spec.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .model import SlotObservation, SystemConfig
from .traces import TraceSeries, load_trace

POISSON_INVERSION_LIMIT = 30.0
DAY_SLOTS = 288

OBSERVATION_STREAM = 0
RATIO_STREAM = 1
POLICY_STREAM = 2


def stream(seed: int, stream_id: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), stream_id])))


def poisson(lam: float, rng: np.random.Generator) -> int:
    if lam < 0:
        raise ValueError(f"Poisson rate must be non-negative, got {lam}")
    if lam == 0:
        return 0
    if lam < POISSON_INVERSION_LIMIT:
        return _poisson_inversion(lam, rng)
    return _poisson_ptrs(lam, rng)


def _poisson_inversion(lam, rng):
    u = rng.random()
    k = 0
    p = math.exp(-lam)
    cdf = p
    # the k cap only matters if rounding leaves cdf a hair below u
    while u > cdf and k < 1000:
        k += 1
        p *= lam / k
        cdf += p
    return k


def _poisson_ptrs(lam, rng):
    slam = math.sqrt(lam)
    loglam = math.log(lam)
    b = 0.931 + 2.53 * slam
    a = -0.059 + 0.02483 * b
    inv_alpha = 1.1239 + 1.1328 / (b - 3.4)
    v_r = 0.9277 - 3.6224 / (b - 2)
    while True:
        u = rng.random() - 0.5
        v = rng.random()
        us = 0.5 - abs(u)
        k = math.floor((2 * a / us + b) * u + lam + 0.43)
        if us >= 0.07 and v <= v_r:
            return k
        if k < 0 or (us < 0.013 and v > us):
            continue
        if (math.log(v) + math.log(inv_alpha) - math.log(a / (us * us) + b)
                <= -lam + k * loglam - math.lgamma(k + 1)):
            return k


@dataclass
class GeneratorSpec:
    """Parameters of the synthetic processes; each field is a plain dict.

    ``arrival``: ``{"kind": "poisson", "rate_per_slot": [K], "truncation": [K]}``
    ``service``: ``{"kind": "uniform_integer", "low": [[N x K]], "high": [[N x K]]}``
    or ``{"kind": "truncated_poisson", "mean": [[N x K]]}``, optional ``truncation``
    ``pue``: ``constant`` (``value``), ``sinusoidal_diurnal`` (``mean``,
    ``amplitude``, ``phase``, ``period``) or ``file`` (``path``)
    ``price``: ``constant`` (``value``), ``step_schedule`` (``schedule``: per DC a
    list of ``[start_slot, value]``, ``period``) or ``file`` (``path``)
    ``ratio``: ``dataset_proportional``, ``manager_local`` (``locality``),
    ``dirichlet_random`` (``alpha``) or ``file`` (``path``); may be empty when
    the system config carries explicit ratios.
    """

    arrival: dict
    service: dict
    pue: dict
    price: dict
    ratio: dict = field(default_factory=dict)
    seed: int = 0

    @classmethod
    def from_dict(cls, data: dict) -> "GeneratorSpec":
        return cls(
            arrival=dict(data["arrival"]),
            service=dict(data["service"]),
            pue=dict(data["pue"]),
            price=dict(data["price"]),
            ratio=dict(data.get("ratio") or {}),
            seed=int(data.get("seed", 0)),
        )

    def to_dict(self) -> dict:
        return {"arrival": self.arrival, "service": self.service, "pue": self.pue,
                "price": self.price, "ratio": self.ratio, "seed": self.seed}


class SpecError(ValueError):
    pass


def _vec(values, length, name):
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 0:
        arr = np.full(length, float(arr))
    if arr.shape != (length,):
        raise SpecError(f"{name} has shape {arr.shape}, expected ({length},)")
    return arr


def _mat(values, shape, name):
    arr = np.asarray(values, dtype=float)
    if arr.shape != shape:
        raise SpecError(f"{name} has shape {arr.shape}, expected {shape}")
    return arr


def _truncation(section, bound, name):
    if "truncation" not in section:
        return bound
    trunc = _vec(section["truncation"], len(bound), f"{name}.truncation")
    if not np.array_equal(trunc, bound):
        raise SpecError(f"{name}.truncation {trunc.tolist()} does not match config bound {bound.tolist()}")
    return trunc


class _Profile:
    """Per-DC deterministic series (PUE or price) indexed by slot."""

    def __init__(self, section: dict, kind: str, config: SystemConfig):
        n = config.num_dcs
        self.kind = section.get("kind")
        name = "pue" if kind == "pue" else "price"
        if self.kind == "constant":
            self.value = _vec(section["value"], n, f"{name}.value")
        elif self.kind == "sinusoidal_diurnal" and kind == "pue":
            self.mean = _vec(section["mean"], n, "pue.mean")
            self.amplitude = _vec(section.get("amplitude", 0.0), n, "pue.amplitude")
            self.phase = _vec(section.get("phase", 0.0), n, "pue.phase")
            self.period = float(section.get("period", DAY_SLOTS))
            if self.period <= 0 or np.any(self.amplitude < 0):
                raise SpecError("pue period must be positive and amplitudes non-negative")
        elif self.kind == "step_schedule" and kind == "price_weight":
            schedule = section["schedule"]
            if len(schedule) != n:
                raise SpecError(f"price.schedule lists {len(schedule)} DCs, expected {n}")
            self.period = int(section.get("period", DAY_SLOTS))
            self.steps = []
            for i, steps in enumerate(schedule):
                steps = sorted((int(s), float(v)) for s, v in steps)
                if not steps or steps[0][0] != 0:
                    raise SpecError(f"price.schedule[{i}] must start at slot 0")
                if any(v < 0 for _, v in steps):
                    raise SpecError(f"price.schedule[{i}] has a negative price")
                self.steps.append(steps)
        elif self.kind == "file":
            self.trace: TraceSeries = load_trace(section["path"], kind, config)
        else:
            raise SpecError(f"unsupported {name} kind {self.kind!r}")
        if self.kind == "constant":
            low_ok = self.value >= 1 if kind == "pue" else self.value >= 0
            if not np.all(low_ok):
                raise SpecError(f"{name}.value out of range: {self.value.tolist()}")

    def at(self, t: int) -> np.ndarray:
        if self.kind == "constant":
            return self.value
        if self.kind == "sinusoidal_diurnal":
            wave = self.mean + self.amplitude * np.sin(2 * np.pi * (t + self.phase) / self.period)
            return np.maximum(wave, 1.0)
        if self.kind == "step_schedule":
            pos = t % self.period
            return np.array([[v for s, v in steps if s <= pos][-1] for steps in self.steps])
        return self.trace.at(t)


def generate_observations(spec: GeneratorSpec, config: SystemConfig, horizon: int) -> list[SlotObservation]:
    if horizon < 1:
        raise SpecError(f"horizon must be positive, got {horizon}")
    n, k = config.shape

    arrival = spec.arrival
    if arrival.get("kind", "poisson") != "poisson":
        raise SpecError(f"unsupported arrival kind {arrival.get('kind')!r}")
    rates = _vec(arrival["rate_per_slot"], k, "arrival.rate_per_slot")
    if np.any(rates < 0):
        raise SpecError("arrival rates must be non-negative")
    a_max = _truncation(arrival, config.arrival_bound, "arrival")

    service = spec.service
    mu_max = _truncation(service, config.service_bound, "service")
    service_kind = service.get("kind")
    if service_kind == "uniform_integer":
        low = _mat(service["low"], (n, k), "service.low")
        high = _mat(service["high"], (n, k), "service.high")
        if np.any(low < 0) or np.any(high < low) or np.any(low != np.floor(low)) or np.any(high != np.floor(high)):
            raise SpecError("service bands must be non-negative integers with low <= high")
    elif service_kind == "truncated_poisson":
        mean = _mat(service["mean"], (n, k), "service.mean")
        if np.any(mean < 0):
            raise SpecError("service means must be non-negative")
    else:
        raise SpecError(f"unsupported service kind {service_kind!r}")

    pue = _Profile(spec.pue, "pue", config)
    price = _Profile(spec.price, "price_weight", config)

    rng = stream(spec.seed, OBSERVATION_STREAM)
    observations = []
    for t in range(horizon):
        arrivals = np.array([min(poisson(rates[j], rng), a_max[j]) for j in range(k)], dtype=float)
        if service_kind == "uniform_integer":
            mu = rng.integers(low.astype(np.int64), high.astype(np.int64) + 1).astype(float)
        else:
            mu = np.array([[poisson(mean[i, j], rng) for j in range(k)] for i in range(n)], dtype=float)
        mu = np.minimum(mu, mu_max[None, :])
        observations.append(SlotObservation(
            slot_index=t, arrivals=arrivals, service_rates=mu,
            pue=np.array(pue.at(t), dtype=float), price_weight=np.array(price.at(t), dtype=float),
        ))
    return observations


def generate_ratios(spec: GeneratorSpec, config: SystemConfig) -> np.ndarray:
    """Allocation ratios ``r[k, i, j]``, each row a distribution over DCs."""
    n, k = config.shape
    section = spec.ratio
    kind = section.get("kind")
    dist = np.asarray(config.dataset_distribution, dtype=float)
    if kind == "dataset_proportional":
        return np.repeat(dist[:, None, :], n, axis=1)
    if kind == "manager_local":
        # manager keeps `locality` of the tasks, the rest follow the data
        beta = float(section.get("locality", 0.5))
        if not 0 <= beta <= 1:
            raise SpecError(f"ratio.locality must lie in [0, 1], got {beta}")
        return beta * np.eye(n)[None, :, :] + (1 - beta) * dist[:, None, :]
    if kind == "dirichlet_random":
        alpha = float(section.get("alpha", 1.0))
        if alpha <= 0:
            raise SpecError(f"ratio.alpha must be positive, got {alpha}")
        rng = stream(spec.seed, RATIO_STREAM)
        draws = rng.gamma(alpha, size=(k, n, n))
        # gamma can underflow to 0 for tiny alpha; keep entries strictly positive
        draws = np.maximum(draws, np.finfo(float).tiny)
        return draws / draws.sum(axis=2, keepdims=True)
    if kind == "file":
        ratios = np.asarray(json.loads(Path(section["path"]).read_text(encoding="utf-8")), dtype=float)
        if ratios.shape != (k, n, n):
            raise SpecError(f"ratio file has shape {ratios.shape}, expected {(k, n, n)}")
        return ratios
    raise SpecError(f"unsupported ratio kind {kind!r}")


def trace_from_profile(section: dict, kind: str, config: SystemConfig, horizon: int) -> TraceSeries:
    """Materialize a PUE or price section as a trace (for ``gen-traces``)."""
    profile = _Profile(section, kind, config)
    values = np.array([profile.at(t) for t in range(horizon)], dtype=float)
    return TraceSeries(kind=kind, values=values, dc_ids=config.dc_ids)
