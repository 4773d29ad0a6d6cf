import math

import pytest

import p2pss


def test_space_saving_example():
    s = p2pss.space_saving([1, 2, 3], 2)
    assert s.counters() == [(3, 2.0), (2, 1.0)]
    assert s.min_frequency == 1.0


def test_merge_and_scale():
    a = p2pss.StreamSummary.from_counters([(1, 6.0), (2, 4.0)], 2)
    b = p2pss.StreamSummary.from_counters([(1, 4.0), (3, 1.0)], 2)
    merged = p2pss.merge(a, b, 2)
    assert merged.counters() == [(1, 10.0), (2, 5.0)]
    assert p2pss.scale(merged, 2.0).counters() == [(1, 5.0), (2, 2.5)]


def test_update_averages():
    x = p2pss.init_peer(0, [7] * 8, 4)
    y = p2pss.init_peer(1, [9] * 4, 4)
    u = p2pss.gossip_update(x, y, 4)
    assert u.n_avg_est == 6.0
    assert u.q_est == 0.5
    assert dict(u.summary.counters()) == {7: 4.0, 9: 2.0}


def test_query_errors():
    y = p2pss.init_peer(1, [9] * 4, 4)
    with pytest.raises(p2pss.DegenerateEstimate):
        p2pss.query(y, 0.02)
    x = p2pss.init_peer(0, [9] * 4, 4)
    with pytest.raises(p2pss.InsufficientRounds):
        p2pss.query(x, 0.02)
    assert issubclass(p2pss.InsufficientRounds, p2pss.Error)


def test_planner():
    assert p2pss.k_of_R(24) == 120
    assert p2pss.r_min() == 21
    assert p2pss.plan("space", eps=0.001)["k"] == 1001
    assert math.isclose(p2pss.epsilon_star(1e4, 0.05, 24), 0.027063761554695046, rel_tol=1e-12)
    with pytest.raises(p2pss.InfeasibleRounds):
        p2pss.k_of_R(20)
    with pytest.raises(p2pss.ConfigError):
        p2pss.plan(eps=0.5)


def test_simulation_recovers_frequent_items():
    settings = {"peers": "20", "n": "50000", "m": "1000", "k": "200", "rounds": "24",
                "phi": "0.05", "topology": "er", "er_prob": "1"}
    states = p2pss.simulate(settings, seed=3)
    assert len(states) == 20
    assert math.isclose(sum(s.q_est for s in states), 1.0, rel_tol=1e-12)
    stream = p2pss.gen_zipf(50000, 1000, 1.2, 0)
    assert len(stream) == 50000
    report = p2pss.query(states[5], 0.05, p_star=20)
    assert report["p_est"] == pytest.approx(20.0, rel=1e-3)


def test_run_experiment():
    res = p2pss.run_experiment({"peers": "16", "n": "20000", "m": "500", "k": "100",
                                "rounds": "20", "phi": "0.05", "repetitions": "2"})
    assert res["recall"]["mean"] == 1.0
    assert res["rows"] == 32
    with pytest.raises(p2pss.ConfigError):
        p2pss.run_experiment({"colour": "blue"})
