import numpy as np
import pytest

from gmsa.model import SlotObservation, SystemConfig


def make_config(ratio, dist=None, power=None, a_max=None, mu_max=None):
    ratio = np.asarray(ratio, dtype=float)
    if ratio.ndim == 2:
        ratio = ratio[None]
    k, n, _ = ratio.shape
    if dist is None:
        dist = np.full((k, n), 1.0 / n)
    return SystemConfig(
        num_dcs=n,
        num_job_types=k,
        dc_ids=[f"dc{i}" for i in range(n)],
        it_power_per_job=np.ones(k) if power is None else power,
        arrival_bound=np.full(k, 100.0) if a_max is None else a_max,
        service_bound=np.full(k, 100.0) if mu_max is None else mu_max,
        allocation_ratio=ratio,
        dataset_distribution=dist,
    )


def make_obs(config, arrivals, service=None, pue=None, price=None, slot=0):
    n, k = config.shape
    return SlotObservation(
        slot_index=slot,
        arrivals=np.broadcast_to(np.asarray(arrivals, dtype=float), (k,)),
        service_rates=np.zeros((n, k)) if service is None else service,
        pue=np.ones(n) if pue is None else pue,
        price_weight=np.ones(n) if price is None else price,
    )


def random_instance(rng, n=None, k=None, bound=100.0):
    """Random valid (config, observation, state) triple."""
    n = n or int(rng.integers(1, 7))
    k = k or int(rng.integers(1, 5))
    ratio = rng.random((k, n, n)) + 1e-3
    ratio /= ratio.sum(axis=2, keepdims=True)
    dist = rng.random((k, n)) + 1e-3
    dist /= dist.sum(axis=1, keepdims=True)
    config = make_config(ratio, dist, power=rng.uniform(0.5, 2.0, k),
                         a_max=np.full(k, bound), mu_max=np.full(k, bound))
    obs = make_obs(config, rng.uniform(0, bound, k), rng.uniform(0, bound, (n, k)),
                   pue=rng.uniform(1.0, 2.0, n), price=rng.uniform(0.0, 3.0, n))
    state = rng.uniform(0, 3 * bound, (n, k))
    return config, obs, state


def random_decision(rng, n, k):
    f = rng.random((n, k))
    return f / f.sum(axis=0, keepdims=True)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def two_dc():
    """N=2, K=1 system from the cost-model examples."""
    return make_config([[0.5, 0.5], [0.2, 0.8]], dist=[[0.5, 0.5]])


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
