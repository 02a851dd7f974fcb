#include "doctest.h"

#include "auvmpc/energy.hpp"
#include "auvmpc/experiments.hpp"
#include "auvmpc/kvfile.hpp"
#include "auvmpc/scenario.hpp"
#include "auvmpc/simulation.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace auvmpc;

TEST_CASE("key-value parsing") {
    const auto e = parse_kv_text("# comment\n a = 1  # trailing\n[pid]\nb=x y\n", "t");
    REQUIRE(e.size() == 2);
    CHECK(e[0].section.empty());
    CHECK(e[0].key == "a");
    CHECK(e[0].value == "1");
    CHECK(e[1].section == "pid");
    CHECK(e[1].value == "x y");
    CHECK(e[1].line == 4);
    CHECK_THROWS(parse_kv_text("novalue\n", "t"));
    CHECK_THROWS(parse_double(KvEntry{"", "k", "1.5x", 1}));
    CHECK(parse_bool(KvEntry{"", "k", "true", 1}));
}

TEST_CASE("scenario parsing") {
    const Scenario sc = parse_scenario(
        "[scenario]\nx0 = 1\nxf = 6\nu0 = 0.2\n"
        "[controller]\ntype = tmpc\nhorizon = 10\nx_switch = 4\n"
        "[vehicle]\nX_uu = 50\n"
        "[pid]\ndepth_kp = 3\n");
    CHECK(sc.x0 == 1.0);
    CHECK(sc.xf == 6.0);
    CHECK(sc.controller == ControllerKind::tracking);
    CHECK(sc.mpc.horizon == 10);
    CHECK(sc.vehicle.X_uu == 50.0);
    CHECK(sc.pid.depth.kp == 3.0);
    CHECK(sc.switch_config().x_switch == 4.0);
    CHECK(sc.mpc_config().destination == 6.0);

    CHECK_THROWS(parse_scenario("[scenario]\nspeed = 1\n"));
    CHECK_THROWS(parse_scenario("[vehicle]\nmass = 1\n"));
    CHECK_THROWS(parse_scenario("[pid]\nroll_kp = 1\n"));
    CHECK_THROWS(parse_scenario("[weather]\nwind = 1\n"));
    CHECK_THROWS(parse_scenario("[controller]\ntype = lqr\n"));
    CHECK_THROWS(parse_scenario("[scenario]\nx0 = 5\nxf = 1\n"));
    CHECK_THROWS(parse_scenario("[scenario]\ndt = 0\n"));
}

TEST_CASE("shipped scenario files load") {
    const std::filesystem::path dir = AUVMPC_SOURCE_DIR "/scenarios";
    const Scenario ref = load_scenario(dir / "reference.cfg");
    const Scenario builtin = Scenario::reference();
    CHECK(ref.xf == builtin.xf);
    CHECK(ref.switch_config().x_switch == doctest::Approx(builtin.switch_config().x_switch));
    CHECK(ref.vehicle.as_map() == builtin.vehicle.as_map());
    CHECK_NOTHROW(load_scenario(dir / "short_hop.cfg"));
}

TEST_CASE("degenerate scenario terminates immediately") {
    Scenario sc = Scenario::reference();
    sc.x0 = sc.xf = 5.0;
    const SimLog log = run_scenario(sc);
    CHECK(log.arrived);
    CHECK(log.steps.empty());
    CHECK(log.ledger.total == 0.0);
}

TEST_CASE("max time is flagged") {
    Scenario sc = Scenario::reference();
    sc.max_time = 5.0;
    const SimLog log = run_scenario(sc);
    CHECK_FALSE(log.arrived);
    CHECK(log.max_time_exceeded);
    CHECK(log.steps.size() == 50);
}

TEST_CASE("closed loop is deterministic and its ledger is consistent") {
    Scenario sc = Scenario::reference();
    sc.xf = 3.0;
    for (auto kind : {ControllerKind::tracking, ControllerKind::energy_optimal, ControllerKind::real_time}) {
        sc.controller = kind;
        const SimLog a = run_scenario(sc);
        const SimLog b = run_scenario(sc);
        CHECK(a.arrived);
        REQUIRE(a.steps.size() == b.steps.size());
        bool identical = true;
        std::vector<ThrusterForces> inputs;
        for (std::size_t k = 0; k < a.steps.size(); ++k) {
            identical = identical && a.steps[k].state.nu == b.steps[k].state.nu &&
                        a.steps[k].state.eta == b.steps[k].state.eta &&
                        a.steps[k].decision.thrust == b.steps[k].decision.thrust;
            if (k > 0) CHECK(a.steps[k].t > a.steps[k - 1].t);
            inputs.push_back(a.steps[k].thrusters);
        }
        CHECK(identical);
        const EnergyLedger e = trip_energy(inputs, sc.dt, sc.vehicle);
        CHECK(std::abs(e.total - a.ledger.total) <= 1e-9 * e.total);
        CHECK(audit_envelope(a).ok());
    }
}

TEST_CASE("trace csv") {
    Scenario sc = Scenario::reference();
    sc.xf = 0.5;
    const SimLog log = run_scenario(sc);
    const auto path = std::filesystem::temp_directory_path() / "auvmpc_trace_test.csv";
    log.write_trace_csv(path);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header.starts_with("t,x,y,z,phi,theta,psi,u,v,w,p,q,r,T1,T2,T3,T4,T_total,solver_invoked,solve_time_s"));
    std::size_t rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    CHECK(rows == log.steps.size());
    std::filesystem::remove(path);
}

TEST_CASE("experiment reports") {
    Scenario sc = Scenario::reference();
    sc.xf = 2.0;
    sc.x_switch_margin.reset();

    const ComparisonReport cmp = compare_controllers(sc);
    REQUIRE(cmp.runs.size() == 3);
    CHECK(cmp.runs[0].controller == "T-MPC");
    CHECK(cmp.table().find("RTEO-MPC") != std::string::npos);

    const HorizonReport hz = sweep_horizon(sc, {1, 5}, 1);
    REQUIRE(hz.points.size() == 2);
    CHECK(hz.points[0].error.empty());
    CHECK(hz.points[0].run.ledger.total > hz.points[1].run.ledger.total);
    CHECK_THROWS(sweep_horizon(sc, {}, 1));
    // a failing horizon is isolated, not fatal
    const HorizonReport bad = sweep_horizon(sc, {0, 5}, 1);
    CHECK_FALSE(bad.points[0].error.empty());
    CHECK(bad.points[1].error.empty());

    const IcReport serial = sweep_initial_conditions(sc, {0.0, 1.5}, {0.0, 0.3}, 2, 1);
    const IcReport parallel = sweep_initial_conditions(sc, {0.0, 1.5}, {0.0, 0.3}, 2, 4);
    REQUIRE(serial.cells.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(serial.cells[i].rteo == parallel.cells[i].rteo);
        CHECK(serial.cells[i].tmpc == parallel.cells[i].tmpc);
        CHECK(serial.cells[i].ok());
    }
    CHECK(serial.cells[2].near_target);
    CHECK(Range{0, 1}.points(3) == std::vector<double>{0.0, 0.5, 1.0});
}
