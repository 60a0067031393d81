import math

import pytest

import regretlab as rl


def test_generate_and_round_trip(tmp_path):
    mdp = rl.generate_mdp(2, 3, 3, seed=4)
    assert (mdp.H, mdp.S, mdp.A) == (2, 3, 3)
    assert rl.validate_mdp(mdp) == []
    assert mdp == rl.generate_mdp(2, 3, 3, seed=4)
    path = tmp_path / "mdp.json"
    rl.save_mdp(mdp, str(path))
    assert rl.load_mdp(str(path)) == mdp
    assert rl.mdp_from_json(mdp.to_json()) == mdp


def test_invalid_mdp_reported():
    bad = rl.TabularMdp(1, 1, 2, [0.2, 1.5], [1.0, 0.9])
    assert len(rl.validate_mdp(bad)) == 2


def test_optimal_values_and_policy_evaluation():
    mdp = rl.TabularMdp(1, 1, 2, [1.0, 0.4], [1.0, 1.0])
    opt = rl.solve_optimal(mdp)
    assert opt["Vstar"] == [[1.0], [0.0]]
    assert opt["policy"] == [0]
    assert rl.evaluate_policy(mdp, [[1]])[0][0] == pytest.approx(0.4)
    gaps = rl.gap_profile(mdp)
    assert gaps["delta_min"] == pytest.approx(0.6)
    flat = rl.TabularMdp(1, 1, 2, [0.5, 0.5], [1.0, 1.0])
    assert rl.gap_profile(flat)["delta_min"] is None


def test_bound_terms_single_gap():
    mdp = rl.TabularMdp(2, 2, 2, [0.0] * 8, [1.0, 0.0] * 8)
    report = rl.bound_terms(mdp, 100)
    assert report["components"]["gap_sum"] == 0.0
    assert report["fine_grained_term"] == pytest.approx(2 * 2 * 8)


def test_weights_and_bonus():
    assert rl.eta(3, 1) == 0.5
    assert rl.eta_weights(2, 1) == pytest.approx([1 / 3, 2 / 3])
    assert rl.eta_weights(0, 5) == []
    assert rl.bonus(1, 1, 1.0, 2.0) == 2.0
    with pytest.raises(ValueError):
        rl.eta(0, 2)


def test_run_and_aggregate():
    records = rl.run_experiment(2, 3, 3, 500, algorithms=["ucb", "ramb"], seeds=3, checkpoints=20)
    assert len(records) == 6
    for r in records:
        assert r["error"] == ""
        assert r["checkpoints"][-1] == 500
        assert all(b >= a for a, b in zip(r["cumulative_regret"], r["cumulative_regret"][1:]))
    again = rl.run_experiment(2, 3, 3, 500, algorithms=["ucb", "ramb"], seeds=3, checkpoints=20)
    assert [r["digest"] for r in again] == [r["digest"] for r in records]
    series = rl.aggregate(records)
    assert [s["algorithm"] for s in series] == ["ucb", "ramb"]
    last = series[0]["points"][-1]
    assert last["regret_p10"] <= last["regret_median"] <= last["regret_p90"]
    assert last["normalized_median"] == pytest.approx(last["regret_median"] / math.log(501))


def test_oracle_learner_has_zero_regret():
    records = rl.run_experiment(2, 3, 3, 200, algorithms=["oracle"], seeds=2)
    assert all(x == 0.0 for r in records for x in r["cumulative_regret"])
