import math
import os
from pathlib import Path

import auvmpc
import pytest


def test_energy_constants():
    assert auvmpc.thruster_power(1.0) == pytest.approx(0.498435, rel=1e-5)
    assert auvmpc.heave_hover_power() == pytest.approx(0.628, rel=1e-2)
    us = auvmpc.static_optimal_velocity()
    assert us == pytest.approx(0.1387, abs=5e-4)
    assert auvmpc.static_trip_cost(10.0) == pytest.approx(10 * auvmpc.epd(us))


def test_vehicle_params():
    p = auvmpc.VehicleParams()
    assert p.X_uu == pytest.approx(48.17)
    p.set("X_uu", 96.34)
    assert auvmpc.static_optimal_velocity(p) == pytest.approx(
        auvmpc.static_optimal_velocity() / math.sqrt(2), rel=1e-9)
    with pytest.raises(Exception):
        p.set("not_a_field", 1.0)


def test_allocation_and_rollout():
    tau = auvmpc.thruster_allocation(auvmpc.ThrusterForces(1, -1, 0, 0))
    assert tau[5] == pytest.approx(0.5588)
    traj = auvmpc.surge_rollout(0.0, 0.0, [15.72] * 15)
    assert len(traj) == 16
    assert traj[1][1] == pytest.approx(0.06998, rel=1e-3)


def test_horizon_solve():
    inputs, cost = auvmpc.solve_horizon("eompc", 0.0, 0.0, 10.0)
    assert len(inputs) == 15
    # opens well above cruise thrust but far from the bound
    assert 1.8 < inputs[0] < 7.86
    assert all(-15.72 - 1e-9 <= t <= 15.72 + 1e-9 for t in inputs)
    assert cost > 0


def test_oracle_and_closed_loop():
    sol = auvmpc.solve_dc(xf=3.0, segments=100)
    assert sol.converged
    sc = auvmpc.Scenario.reference()
    sc.xf = 3.0
    sc.controller = "rteo"
    log = auvmpc.run_scenario(sc)
    assert log.arrived
    assert log.envelope_ratio() <= 1.0
    assert log.ledger.total >= sol.energy * 0.995
    trace = log.trace()
    assert len(trace["t"]) == log.steps
    assert set(["x", "u", "T_total", "solver_invoked"]) <= set(trace)


def test_scenario_file_and_rejection():
    src = Path(os.environ.get("AUVMPC_SOURCE_DIR", Path(__file__).resolve().parents[2]))
    sc = auvmpc.load_scenario(src / "scenarios" / "reference.cfg")
    assert sc.controller == "rteo"
    with pytest.raises(Exception):
        auvmpc.parse_scenario("[scenario]\nspeed = 1\n")
