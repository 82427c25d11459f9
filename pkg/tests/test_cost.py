import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gmsa.cost import slot_cost, unit_costs

from conftest import make_config, make_obs, random_decision, random_instance


def triple_sum_cost(config, obs, f):
    """Direct evaluation of sum_k sum_i sum_j f A w_j PUE_j r_ij P, no vectorization."""
    n, k = config.shape
    total = 0.0
    for kk in range(k):
        for i in range(n):
            for j in range(n):
                total += (f[i][kk] * obs.arrivals[kk] * obs.price_weight[j] * obs.pue[j]
                          * config.allocation_ratio[kk][i][j] * config.it_power_per_job[kk])
    return total


def test_unit_costs_collapse_with_unit_prices(two_dc):
    obs = make_obs(two_dc, [0.0])
    assert np.array_equal(unit_costs(two_dc, obs), [[1.0], [1.0]])


def test_unit_costs_hand_values(two_dc):
    obs = make_obs(two_dc, [0.0], price=[1.0, 2.0])
    assert np.allclose(unit_costs(two_dc, obs), [[1.5], [1.8]], rtol=0, atol=1e-12)


def test_zero_price_zero_cost(two_dc):
    obs = make_obs(two_dc, [10.0], price=[0.0, 0.0])
    assert np.array_equal(unit_costs(two_dc, obs), [[0.0], [0.0]])


def test_slot_cost_examples(two_dc):
    priced = make_obs(two_dc, [10.0], price=[1.0, 2.0])
    assert slot_cost(two_dc, priced, [[1.0], [0.0]]) == pytest.approx(15.0, abs=1e-12)
    assert slot_cost(two_dc, priced, [[0.5], [0.5]]) == pytest.approx(16.5, abs=1e-12)
    idle = make_obs(two_dc, [0.0], price=[1.0, 2.0])
    assert slot_cost(two_dc, idle, [[0.3], [0.7]]) == 0.0


def test_slot_cost_shape_mismatch(two_dc):
    with pytest.raises(ValueError):
        slot_cost(two_dc, make_obs(two_dc, [1.0]), [[1.0, 0.0]])


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_unit_cost_is_it_power_when_pue_and_price_are_one(seed):
    rng = np.random.default_rng(seed)
    config, obs, _ = random_instance(rng)
    n, _ = config.shape
    flat = make_obs(config, obs.arrivals, obs.service_rates, pue=np.ones(n), price=np.ones(n))
    u = unit_costs(config, flat)
    assert np.allclose(u, np.broadcast_to(config.it_power_per_job, u.shape), rtol=1e-12, atol=0)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0, 1))
def test_slot_cost_is_linear_in_decision(seed, alpha):
    rng = np.random.default_rng(seed)
    config, obs, _ = random_instance(rng)
    f1 = random_decision(rng, *config.shape)
    f2 = random_decision(rng, *config.shape)
    mixed = slot_cost(config, obs, alpha * f1 + (1 - alpha) * f2)
    expected = alpha * slot_cost(config, obs, f1) + (1 - alpha) * slot_cost(config, obs, f2)
    assert mixed == pytest.approx(expected, rel=1e-9, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0, 50))
def test_price_scaling_scales_cost(seed, c):
    rng = np.random.default_rng(seed)
    config, obs, _ = random_instance(rng)
    f = random_decision(rng, *config.shape)
    scaled = make_obs(config, obs.arrivals, obs.service_rates, obs.pue, obs.price_weight * c)
    assert slot_cost(config, scaled, f) == pytest.approx(c * slot_cost(config, obs, f), rel=1e-12, abs=1e-12)


def test_vectorized_cost_matches_triple_sum(rng):
    for _ in range(300):
        config, obs, _ = random_instance(rng)
        f = random_decision(rng, *config.shape)
        assert slot_cost(config, obs, f) == pytest.approx(triple_sum_cost(config, obs, f), rel=1e-9, abs=1e-12)
        assert np.all(unit_costs(config, obs) >= 0)
