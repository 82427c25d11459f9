"""Input validation helpers.

``validate_*`` functions collect every violation into a report and never
raise; ``check_*`` functions coerce their argument to a float array and raise
``ValueError`` on the first problem, for use at API boundaries.
"""

from __future__ import annotations

import numpy as np

from .model import SUM_TOL, SlotObservation, SystemConfig, ValidationReport


def _fmt(x) -> str:
    return f"{float(x):.10g}"


def validate_config(config: SystemConfig) -> ValidationReport:
    report = ValidationReport()
    n, k = config.num_dcs, config.num_job_types
    if n < 1:
        report.add("range", "num_dcs", (), n, f"num_dcs must be positive, got {n}")
    if k < 1:
        report.add("range", "num_job_types", (), k, f"num_job_types must be positive, got {k}")
    if len(config.dc_ids) != n:
        report.add("shape", "dc_ids", (), len(config.dc_ids),
                   f"dc_ids has {len(config.dc_ids)} labels, expected {n}")
    elif len(set(config.dc_ids)) != n:
        report.add("range", "dc_ids", (), list(config.dc_ids), "dc_ids must be unique")

    for name in ("it_power_per_job", "arrival_bound", "service_bound"):
        vec = getattr(config, name)
        if vec.shape != (k,):
            report.add("shape", name, (), vec.shape, f"{name} has shape {vec.shape}, expected ({k},)")
            continue
        for idx in np.flatnonzero(~(vec > 0)):
            report.add("range", name, (int(idx),), float(vec[idx]),
                       f"{name}[{idx}] must be strictly positive, got {_fmt(vec[idx])}")

    ratio = config.allocation_ratio
    if ratio.shape != (k, n, n):
        report.add("shape", "allocation_ratio", (), ratio.shape,
                   f"allocation_ratio has shape {ratio.shape}, expected ({k}, {n}, {n})")
    else:
        for kk, i, j in zip(*np.nonzero((ratio < 0) | (ratio > 1) | ~np.isfinite(ratio))):
            report.add("range", "allocation_ratio", (int(kk), int(i), int(j)), float(ratio[kk, i, j]),
                       f"allocation_ratio[k={kk}][i={i}][j={j}] = {_fmt(ratio[kk, i, j])} outside [0, 1]")
        sums = ratio.sum(axis=2)
        for kk, i in zip(*np.nonzero(np.abs(sums - 1.0) > SUM_TOL)):
            report.add("sum", "allocation_ratio", (int(kk), int(i)), float(sums[kk, i]),
                       f"allocation_ratio[k={kk}][i={i}] sums to {_fmt(sums[kk, i])}")

    dist = config.dataset_distribution
    if dist.shape != (k, n):
        report.add("shape", "dataset_distribution", (), dist.shape,
                   f"dataset_distribution has shape {dist.shape}, expected ({k}, {n})")
    else:
        for kk, j in zip(*np.nonzero((dist < 0) | (dist > 1) | ~np.isfinite(dist))):
            report.add("range", "dataset_distribution", (int(kk), int(j)), float(dist[kk, j]),
                       f"dataset_distribution[k={kk}][{j}] = {_fmt(dist[kk, j])} outside [0, 1]")
        sums = dist.sum(axis=1)
        for kk in np.flatnonzero(np.abs(sums - 1.0) > SUM_TOL):
            report.add("sum", "dataset_distribution", (int(kk),), float(sums[kk]),
                       f"dataset_distribution[k={kk}] sums to {_fmt(sums[kk])}")
    return report


def validate_observation(obs: SlotObservation, config: SystemConfig) -> ValidationReport:
    report = ValidationReport()
    n, k = config.shape
    expected = {"arrivals": (k,), "service_rates": (n, k), "pue": (n,), "price_weight": (n,)}
    for name, shape in expected.items():
        got = getattr(obs, name).shape
        if got != shape:
            report.add("shape", name, (), got, f"{name} has shape {got}, expected {shape}")
    if not report.ok:
        return report

    if obs.slot_index < 0:
        report.add("range", "slot_index", (), obs.slot_index, f"slot_index {obs.slot_index} is negative")
    a = obs.arrivals
    for idx in np.flatnonzero(~(a >= 0)):
        report.add("range", "arrivals", (int(idx),), float(a[idx]), f"arrivals[{idx}] is negative ({_fmt(a[idx])})")
    for idx in np.flatnonzero(a > config.arrival_bound):
        report.add("range", "arrivals", (int(idx),), float(a[idx]),
                   f"arrivals[{idx}] exceeds A_Max ({_fmt(a[idx])} > {_fmt(config.arrival_bound[idx])})")
    mu = obs.service_rates
    for i, kk in zip(*np.nonzero(~(mu >= 0))):
        report.add("range", "service_rates", (int(i), int(kk)), float(mu[i, kk]),
                   f"service_rates[{i}][{kk}] is negative ({_fmt(mu[i, kk])})")
    for i, kk in zip(*np.nonzero(mu > config.service_bound[None, :])):
        report.add("range", "service_rates", (int(i), int(kk)), float(mu[i, kk]),
                   f"service_rates[{i}][{kk}] exceeds mu_Max ({_fmt(mu[i, kk])} > {_fmt(config.service_bound[kk])})")
    for idx in np.flatnonzero(~(obs.pue >= 1)):
        report.add("range", "pue", (int(idx),), float(obs.pue[idx]), f"pue[{idx}] below 1 ({_fmt(obs.pue[idx])})")
    for idx in np.flatnonzero(~(obs.price_weight >= 0)):
        report.add("range", "price_weight", (int(idx),), float(obs.price_weight[idx]),
                   f"price_weight[{idx}] is negative ({_fmt(obs.price_weight[idx])})")
    return report


def check_matrix(value, shape: tuple[int, int], name: str) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.shape != shape:
        raise ValueError(f"{name} has shape {arr.shape}, expected {shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def check_state(state, config: SystemConfig) -> np.ndarray:
    q = check_matrix(state, config.shape, "queue state")
    if np.any(q < 0):
        raise ValueError("queue state has negative backlog")
    return q


def check_decision(decision, shape: tuple[int, int], tol: float = SUM_TOL) -> np.ndarray:
    """Return ``decision`` as an array after checking it is column-stochastic."""
    f = check_matrix(decision, shape, "decision")
    if np.any(f < -tol) or np.any(f > 1 + tol):
        raise ValueError("decision entries must lie in [0, 1]")
    sums = f.sum(axis=0)
    bad = np.flatnonzero(np.abs(sums - 1.0) > tol)
    if bad.size:
        raise ValueError(f"decision column {bad[0]} sums to {_fmt(sums[bad[0]])}, expected 1")
    return f


def check_config(config: SystemConfig) -> SystemConfig:
    report = validate_config(config)
    if not report.ok:
        raise ValueError("invalid system config: " + "; ".join(report.messages()))
    return config


def check_observation(obs: SlotObservation, config: SystemConfig) -> SlotObservation:
    report = validate_observation(obs, config)
    if not report.ok:
        raise ValueError(f"invalid observation at slot {obs.slot_index}: " + "; ".join(report.messages()))
    return obs
