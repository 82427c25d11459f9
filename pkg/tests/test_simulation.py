import json
from dataclasses import replace

import numpy as np
import pytest

from gmsa.generators import generate_observations
from gmsa.model import SlotObservation
from gmsa.scenario import reference_scenario
from gmsa.schedulers import BaseScheduler, DataScheduler, GMSAScheduler, RandomScheduler
from gmsa.simulation import (
    SimulationError,
    observation_digest,
    per_slot_csv,
    run_simulation,
    run_sweep,
    sweep_csv,
    write_record,
    write_sweep,
)

from conftest import make_config, make_obs


@pytest.fixture(scope="module")
def ref():
    s = reference_scenario(seed=5)
    config = s.build_config()
    return s, config, generate_observations(s.generator, config, 288)


def test_zero_arrivals_cost_nothing():
    cfg = make_config([[0.5, 0.5], [0.2, 0.8]])
    obs = [make_obs(cfg, [0.0], service=[[3.0], [1.0]], price=[1.0, 2.0], slot=t) for t in range(10)]
    for est in (GMSAScheduler(v=5.0), DataScheduler(), RandomScheduler(random_state=1)):
        rec = run_simulation(cfg, obs, est, seed=1)
        assert rec.time_average_cost == 0.0
        assert np.all(rec.total_backlog == 0.0)


def test_single_slot_large_v():
    cfg = make_config([[0.5, 0.5], [0.2, 0.8]])
    obs = [make_obs(cfg, [10.0], service=[[4.0], [4.0]], price=[1.0, 2.0])]
    rec = run_simulation(cfg, obs, GMSAScheduler(v=1e3))
    assert rec.cost[0] == pytest.approx(15.0, abs=1e-12)
    assert rec.total_backlog[0] == 6.0


def test_record_invariants(ref):
    _, config, obs = ref
    for est in (GMSAScheduler(v=10.0), DataScheduler(), RandomScheduler()):
        rec = run_simulation(config, obs, est, seed=5)
        assert rec.horizon == 288
        assert sum(float(c) for c in rec.cost) == rec.total_cost
        assert rec.time_average_cost == pytest.approx(rec.total_cost / 288, rel=1e-15)
        assert rec.time_average_cost == pytest.approx(np.mean(rec.cost), rel=1e-9)
        assert rec.time_average_backlog == pytest.approx(np.mean(rec.total_backlog), rel=1e-9)
        assert np.all(rec.total_backlog >= 0)


def test_baselines_record_v_zero(ref):
    _, config, obs = ref
    assert run_simulation(config, obs, "data").v == 0.0
    assert run_simulation(config, obs, GMSAScheduler(v=2.0)).v == 2.0


def test_runs_are_deterministic(ref):
    _, config, obs = ref
    for est in (GMSAScheduler(v=1.0), RandomScheduler()):
        a = run_simulation(config, obs, est, seed=5)
        b = run_simulation(config, obs, est, seed=5)
        assert per_slot_csv(a) == per_slot_csv(b)
        assert a.summary() == b.summary()


def test_caller_estimator_is_not_fitted(ref):
    _, config, obs = ref
    est = GMSAScheduler(v=1.0)
    run_simulation(config, obs[:3], est)
    assert not hasattr(est, "config_")


class _Broken(BaseScheduler):
    name = "broken"

    def predict(self, state, obs, unit=None):
        return np.full((self.n_dcs_, self.n_job_types_), 0.5)


def test_invalid_decision_aborts_with_slot(ref):
    _, config, obs = ref
    with pytest.raises(SimulationError) as err:
        run_simulation(config, obs, _Broken())
    assert err.value.slot == 0


def test_invalid_observation_aborts_with_slot():
    cfg = make_config([[1.0]], a_max=[5.0])
    good = make_obs(cfg, [1.0], service=[[1.0]])
    bad = SlotObservation(1, [9.0], [[1.0]], [1.0], [1.0])
    with pytest.raises(SimulationError, match="slot 1"):
        run_simulation(cfg, [good, bad], GMSAScheduler())


def test_empty_observations_rejected():
    with pytest.raises(ValueError):
        run_simulation(make_config([[1.0]]), [], GMSAScheduler())


def test_sweep_shapes_and_v_independence(ref):
    s, config, _ = ref
    one = run_sweep(config, s.generator, 48, [1.0], ["gmsa"])
    assert [(e.scheduler, e.v) for e in one.entries] == [("gmsa", 1.0)]

    vs = [0.01, 0.1, 1.0, 10.0, 100.0]
    res = run_sweep(config, s.generator, 48, vs, ["gmsa", "data", "random"], replications=2)
    assert len(res.entries) == 15
    for name in ("data", "random"):
        rows = [res.get(name, v) for v in vs]
        assert len({(r.time_average_cost, r.time_average_backlog) for r in rows}) == 1


def test_sweep_uses_common_random_numbers(ref):
    s, config, _ = ref
    res = run_sweep(config, s.generator, 48, [0.1, 10.0], ["gmsa", "data", "random"],
                    replications=3, keep_records=True)
    by_seed = {}
    for rec in res.records:
        by_seed.setdefault(rec.seed, set()).add(rec.observation_digest)
    assert sorted(by_seed) == [5, 6, 7]
    assert all(len(d) == 1 for d in by_seed.values())
    assert len({next(iter(d)) for d in by_seed.values()}) == 3


def test_sweep_mean_over_replications(ref):
    s, config, _ = ref
    res = run_sweep(config, s.generator, 48, [1.0], ["gmsa"], replications=3)
    manual = [run_simulation(config, generate_observations(replace(s.generator, seed=seed), config, 48),
                             GMSAScheduler(v=1.0), seed=seed).time_average_cost for seed in (5, 6, 7)]
    assert res.entries[0].time_average_cost == pytest.approx(np.mean(manual), rel=1e-12)


def test_sweep_rejects_empty_v(ref):
    s, config, _ = ref
    with pytest.raises(ValueError):
        run_sweep(config, s.generator, 10, [], ["gmsa"])


def test_gmsa_backlog_is_bounded(ref):
    _, config, obs = ref
    for v in (0.1, 1.0, 10.0):
        second, last = run_simulation(config, obs, GMSAScheduler(v=v)).quarter_means()
        assert last <= 2 * second + 1e-9 or last < 1.0


def test_cost_trend_in_v(ref):
    s, config, _ = ref
    vs = [0.01, 1.0, 10.0, 100.0]
    res = run_sweep(config, s.generator, 288, vs, ["gmsa"], replications=5)
    costs = [res.get("gmsa", v).time_average_cost for v in vs]
    # non-increasing up to 1% sampling slack
    assert all(b <= a * 1.01 for a, b in zip(costs, costs[1:]))


def test_output_files(ref, tmp_path):
    s, config, obs = ref
    rec = run_simulation(config, obs[:5], GMSAScheduler(v=1.0), seed=5)
    paths = write_record(rec, tmp_path)
    lines = paths["per_slot"].read_text().splitlines()
    assert lines[0] == "slot,cost,total_backlog,drift_plus_penalty"
    assert len(lines) == 6
    summary = json.loads(paths["summary"].read_text())
    assert summary["time_average_cost"] == rec.time_average_cost

    res = run_sweep(config, s.generator, 10, [1.0, 2.0], ["gmsa", "data"])
    paths = write_sweep(res, tmp_path)
    assert paths["csv"].read_text() == sweep_csv(res)
    assert paths["csv"].read_text().splitlines()[0] == "scheduler,v,time_average_cost,time_average_backlog"
    assert len(json.loads(paths["json"].read_text())["entries"]) == 4


def test_digest_changes_with_observations(ref):
    _, _, obs = ref
    assert observation_digest(obs) == observation_digest(list(obs))
    assert observation_digest(obs[:-1]) != observation_digest(obs)
