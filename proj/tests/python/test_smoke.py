import math

import pytest

import evcharge


def hand_instance():
    return evcharge.Scenario(
        "hand",
        occupancy=[[1], [1]],
        load=[5.0],
        capacity=[300.0, 300.0],
        socket_limit=[7.0, 7.0],
        waste=[0.01, 0.01],
        prices=[2.0, 1.0],
    )


def test_version():
    assert evcharge.__version__


def test_nominal_and_fcfs():
    sc = hand_instance()
    opt = evcharge.optimize_nominal(sc)
    assert [row[0] for row in opt.schedule.allocation] == pytest.approx([0.0, 5.0])
    assert opt.cost.total_cost == pytest.approx(5 * 1.01)
    fcfs = evcharge.fcfs(sc)
    assert fcfs.total_shortfall() == 0.0
    assert evcharge.evaluate_cost(fcfs.schedule, sc).total_cost == pytest.approx(10 * 1.01)
    assert evcharge.violations(opt.schedule, sc) == []


def test_robust_spreads_power():
    sc = evcharge.Scenario(
        "spread", [[1], [1]], [6.0], [300.0] * 2, [7.0] * 2, [0.0] * 2, [1.0, 1.0]
    )
    res = evcharge.optimize_robust_price(sc, radius=1.0)
    assert res.converged
    assert res.step_energy == pytest.approx([3.0, 3.0], abs=1e-4)
    assert res.objective == pytest.approx(6 + 3 * math.sqrt(2), rel=1e-6)


def test_infeasible_raises():
    sc = evcharge.Scenario("bad", [[1], [1]], [15.0], [300.0] * 2, [7.0] * 2, [0.0] * 2, [1.0, 1.0])
    assert not evcharge.check_feasibility(sc).feasible
    with pytest.raises(evcharge.InfeasibleScenario):
        evcharge.optimize_nominal(sc)
    with pytest.raises(evcharge.EvchargeError):
        evcharge.optimize_nominal(sc)


def test_bad_shapes():
    with pytest.raises(evcharge.EvchargeError):
        evcharge.Scenario("x", [[1, 0]], [1.0], [1.0], [1.0], [0.0], [1.0])


def test_json_round_trip():
    sc = evcharge.synthetic_scenario(8, 24, seed=3)
    back = evcharge.Scenario.from_json(sc.to_json())
    assert back.occupancy == sc.occupancy
    assert back.load == sc.load


def test_compare_and_summarize():
    scenarios = [evcharge.synthetic_scenario(10, 24, seed=s) for s in range(6)]
    rows = evcharge.compare(scenarios, workers=2)
    assert [r.scenario_id for r in rows] == [s.scenario_id for s in scenarios]
    assert all(r.comparable for r in rows)
    assert all(r.optimized_cost <= r.trivial_cost + 1e-9 for r in rows)
    table = evcharge.summarize(rows, ["N>0", "N>=10"])
    assert table[0].scenario_count == 6
    assert table[0].trivial_cost == pytest.approx(sum(r.trivial_cost for r in rows))


def test_ingest_files(tmp_path):
    sessions = tmp_path / "s.csv"
    sessions.write_text(
        "session_id,arrival,departure,energy_kwh\n"
        "s1,2018-04-25T08:15:00,2018-04-25T11:40:00,12.5\n"
    )
    prices = tmp_path / "p.csv"
    prices.write_text("date,hour,price\n" + "".join(f"2018-04-25,{h},50\n" for h in range(24)))
    built = evcharge.ingest(sessions, prices)
    assert len(built.scenarios) == 1
    column = [row[0] for row in built.scenarios[0].occupancy]
    assert [t for t, a in enumerate(column, start=1) if a] == [9, 10, 11, 12]


def test_cli_entry(tmp_path, capsys):
    code = evcharge.main(["solve", "--synthetic", "5", "12", "1", "--out", str(tmp_path)])
    assert code == 0
    assert (tmp_path / "result.json").exists()
    assert evcharge.main(["simulate"]) == 2
