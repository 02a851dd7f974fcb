#include "auvmpc/collocation.hpp"
#include "auvmpc/dynamics.hpp"
#include "auvmpc/energy.hpp"
#include "auvmpc/experiments.hpp"
#include "auvmpc/mpc.hpp"
#include "auvmpc/scenario.hpp"
#include "auvmpc/simulation.hpp"

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace auvmpc;

namespace {

// trace as a dict of numpy columns, same names as trace.csv
py::dict trace_columns(const SimLog& log) {
    static const char* state_names[] = {"x", "y", "z", "phi", "theta", "psi", "u", "v", "w", "p", "q", "r"};
    const auto n = static_cast<py::ssize_t>(log.steps.size());
    py::dict out;
    auto column = [&](const char* name, auto get) {
        py::array_t<double> a(n);
        auto m = a.mutable_unchecked<1>();
        for (py::ssize_t k = 0; k < n; ++k) m(k) = get(log.steps[static_cast<std::size_t>(k)]);
        out[name] = a;
    };
    column("t", [](const StepRecord& r) { return r.t; });
    for (int i = 0; i < 6; ++i) {
        column(state_names[i], [i](const StepRecord& r) { return r.state.eta[i]; });
        column(state_names[i + 6], [i](const StepRecord& r) { return r.state.nu[i]; });
    }
    column("T1", [](const StepRecord& r) { return r.thrusters.T1; });
    column("T2", [](const StepRecord& r) { return r.thrusters.T2; });
    column("T3", [](const StepRecord& r) { return r.thrusters.T3; });
    column("T4", [](const StepRecord& r) { return r.thrusters.T4; });
    column("T_total", [](const StepRecord& r) { return r.decision.thrust; });
    column("solver_invoked", [](const StepRecord& r) { return r.decision.solver_invoked ? 1.0 : 0.0; });
    column("solve_time_s", [](const StepRecord& r) { return r.decision.solve_time; });
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Energy-optimal surge control of a small AUV: plant, MPC variants, baseline and experiments.";

    py::class_<VehicleParams>(m, "VehicleParams")
        .def(py::init<>())
        .def("set", &VehicleParams::set)
        .def("as_dict", &VehicleParams::as_map)
        .def("validate", &VehicleParams::validate)
        .def_property_readonly("power_ratio", &VehicleParams::power_ratio)
        .def("__getattr__", [](const VehicleParams& p, const std::string& k) {
            const auto all = p.as_map();
            const auto it = all.find(k);
            if (it == all.end()) throw py::attribute_error(k);
            return it->second;
        });
    m.def("load_vehicle_params", &load_vehicle_params, py::arg("path"));

    py::class_<ThrusterForces>(m, "ThrusterForces")
        .def(py::init<double, double, double, double>(), py::arg("T1") = 0.0, py::arg("T2") = 0.0,
             py::arg("T3") = 0.0, py::arg("T4") = 0.0)
        .def_readwrite("T1", &ThrusterForces::T1)
        .def_readwrite("T2", &ThrusterForces::T2)
        .def_readwrite("T3", &ThrusterForces::T3)
        .def_readwrite("T4", &ThrusterForces::T4);

    py::class_<VehicleState>(m, "VehicleState")
        .def(py::init<>())
        .def_readwrite("nu", &VehicleState::nu)
        .def_readwrite("eta", &VehicleState::eta);

    // dynamics
    m.def("thruster_allocation", &thruster_allocation, py::arg("T"), py::arg("params") = VehicleParams{});
    m.def("thruster_power", &thruster_power, py::arg("thrust"), py::arg("params") = VehicleParams{});
    m.def("integrate_step", &integrate_step, py::arg("state"), py::arg("tau"), py::arg("dt"),
          py::arg("params") = VehicleParams{});

    // energy
    py::class_<EnergyLedger>(m, "EnergyLedger")
        .def_readonly("surge", &EnergyLedger::surge)
        .def_readonly("heave", &EnergyLedger::heave)
        .def_readonly("pitch", &EnergyLedger::pitch)
        .def_readonly("yaw", &EnergyLedger::yaw)
        .def_readonly("total", &EnergyLedger::total)
        .def_readonly("travel_time", &EnergyLedger::travel_time);
    m.def(
        "trip_energy",
        [](const std::vector<ThrusterForces>& in, double dt, const VehicleParams& p) { return trip_energy(in, dt, p); },
        py::arg("inputs"), py::arg("dt"), py::arg("params") = VehicleParams{});
    m.def("heave_hover_power", &heave_hover_power, py::arg("params") = VehicleParams{});
    m.def("epd", &epd, py::arg("u"), py::arg("params") = VehicleParams{});
    m.def("static_optimal_velocity", &static_optimal_velocity, py::arg("params") = VehicleParams{});
    m.def(
        "static_trip_cost", [](double d, const VehicleParams& p) { return static_trip_cost(d, p); },
        py::arg("distance"), py::arg("params") = VehicleParams{});

    // surge prediction and costs
    m.def(
        "surge_rollout",
        [](double x0, double u0, const std::vector<double>& inputs, double dt, const VehicleParams& p) {
            std::vector<std::pair<double, double>> out;
            for (const auto& s : surge_rollout({x0, u0}, FrozenContext{}, inputs, dt, p)) out.emplace_back(s.x, s.u);
            return out;
        },
        py::arg("x0"), py::arg("u0"), py::arg("inputs"), py::arg("dt") = 0.1, py::arg("params") = VehicleParams{},
        "Level-attitude surge prediction; returns (x, u) pairs including the initial state.");
    m.def(
        "terminal_cost",
        [](double xN, double uN, double destination, const VehicleParams& p) {
            MpcConfig cfg;
            cfg.destination = destination;
            return terminal_cost({xN, uN}, cfg, p);
        },
        py::arg("x_N"), py::arg("u_N"), py::arg("destination"), py::arg("params") = VehicleParams{});
    m.def(
        "solve_horizon",
        [](const std::string& kind, double x0, double u0, double destination, int horizon, const VehicleParams& p) {
            MpcConfig cfg;
            cfg.destination = destination;
            cfg.horizon = horizon;
            const CostKind k = kind == "tracking" || kind == "tmpc" ? CostKind::tracking : CostKind::energy_optimal;
            HorizonCost cost(k, p, cfg, static_optimal_velocity(p));
            cost.reset({x0, u0}, FrozenContext{});
            const HorizonSolution s = solve_horizon(cost, cfg, {});
            return py::make_tuple(s.inputs, s.cost);
        },
        py::arg("kind"), py::arg("x0"), py::arg("u0"), py::arg("destination"), py::arg("horizon") = 15,
        py::arg("params") = VehicleParams{}, "Solve one MPC horizon ('eompc' or 'tmpc'); returns (inputs, cost).");

    // baseline
    py::class_<CollocationSolution>(m, "CollocationSolution")
        .def_readonly("t", &CollocationSolution::t)
        .def_readonly("x", &CollocationSolution::x)
        .def_readonly("u", &CollocationSolution::u)
        .def_readonly("thrust", &CollocationSolution::thrust)
        .def_readonly("energy", &CollocationSolution::energy)
        .def_readonly("travel_time", &CollocationSolution::travel_time)
        .def_readonly("max_defect", &CollocationSolution::max_defect)
        .def_readonly("converged", &CollocationSolution::converged)
        .def_readonly("diagnostics", &CollocationSolution::diagnostics);
    m.def(
        "solve_dc",
        [](double x0, double xf, double u0, int segments, const VehicleParams& p) {
            CollocationProblem pb;
            pb.x0 = x0;
            pb.xf = xf;
            pb.u0 = u0;
            pb.segments = segments;
            pb.params = p;
            py::gil_scoped_release unlock;
            return solve_dc(pb);
        },
        py::arg("x0") = 0.0, py::arg("xf") = 10.0, py::arg("u0") = 0.0, py::arg("segments") = 300,
        py::arg("params") = VehicleParams{});
    m.def("resample_oracle", &resample_oracle, py::arg("x_remaining"), py::arg("u_start"),
          py::arg("params") = VehicleParams{}, py::arg("segments") = 300,
          py::call_guard<py::gil_scoped_release>());

    // scenarios and experiments
    py::class_<Scenario>(m, "Scenario")
        .def_static("reference", &Scenario::reference)
        .def_readwrite("x0", &Scenario::x0)
        .def_readwrite("xf", &Scenario::xf)
        .def_readwrite("u0", &Scenario::u0)
        .def_readwrite("dt", &Scenario::dt)
        .def_readwrite("vehicle", &Scenario::vehicle)
        .def_readwrite("max_time", &Scenario::max_time)
        .def_property(
            "controller", [](const Scenario& s) { return to_string(s.controller); },
            [](Scenario& s, const std::string& k) { s.controller = parse_controller_kind(k); })
        .def_property(
            "horizon", [](const Scenario& s) { return s.mpc.horizon; },
            [](Scenario& s, int n) { s.mpc.horizon = n; });
    m.def("load_scenario", &load_scenario, py::arg("path"));
    m.def("parse_scenario", &parse_scenario, py::arg("text"), py::arg("origin") = "<text>");

    py::class_<SimLog>(m, "SimLog")
        .def_readonly("controller", &SimLog::controller)
        .def_readonly("ledger", &SimLog::ledger)
        .def_readonly("arrived", &SimLog::arrived)
        .def_readonly("max_time_exceeded", &SimLog::max_time_exceeded)
        .def_readonly("error", &SimLog::error)
        .def_readonly("solver_calls", &SimLog::solver_calls)
        .def_readonly("total_solve_time", &SimLog::total_solve_time)
        .def_readonly("max_solve_time", &SimLog::max_solve_time)
        .def_property_readonly("steps", [](const SimLog& l) { return l.steps.size(); })
        .def("average_solve_time", &SimLog::average_solve_time)
        .def("solver_fraction", &SimLog::solver_fraction)
        .def("trace", &trace_columns)
        .def("write_trace_csv", &SimLog::write_trace_csv)
        .def("envelope_ratio", [](const SimLog& l) { return audit_envelope(l).worst_ratio; });
    m.def("run_scenario", &run_scenario, py::arg("scenario"), py::call_guard<py::gil_scoped_release>());

    py::class_<ComparisonReport>(m, "ComparisonReport")
        .def_readonly("oracle", &ComparisonReport::oracle)
        .def_readonly("logs", &ComparisonReport::logs)
        .def("table", &ComparisonReport::table)
        .def("write_summary_csv", &ComparisonReport::write_summary_csv)
        .def("losses", [](const ComparisonReport& r) {
            py::dict d;
            for (const auto& run : r.runs) d[py::str(run.controller)] = r.loss_percent(run);
            return d;
        });
    m.def("compare_controllers", &compare_controllers, py::arg("scenario"), py::arg("timing_repeats") = 1,
          py::call_guard<py::gil_scoped_release>());

    py::class_<HorizonReport>(m, "HorizonReport")
        .def_readonly("oracle_energy", &HorizonReport::oracle_energy)
        .def("table", &HorizonReport::table)
        .def("energies", [](const HorizonReport& r) {
            std::vector<std::pair<int, double>> out;
            for (const auto& p : r.points) out.emplace_back(p.horizon, p.error.empty() ? p.run.ledger.total : NAN);
            return out;
        });
    m.def("sweep_horizon", &sweep_horizon, py::arg("scenario"), py::arg("horizons"), py::arg("repeats") = 10,
          py::call_guard<py::gil_scoped_release>());

    py::class_<IcReport>(m, "IcReport")
        .def("table", &IcReport::table)
        .def("worst_rteo_gap_percent", &IcReport::worst_rteo_gap_percent)
        .def("worst_tmpc_gap_percent", &IcReport::worst_tmpc_gap_percent)
        .def("failed_cells", &IcReport::failed_cells)
        .def("write_csv", &IcReport::write_csv);
    m.def(
        "sweep_initial_conditions",
        [](const Scenario& sc, std::pair<double, double> x0, std::pair<double, double> u0, int grid, int workers) {
            return sweep_initial_conditions(sc, {x0.first, x0.second}, {u0.first, u0.second}, grid, workers);
        },
        py::arg("scenario"), py::arg("x0_range"), py::arg("u0_range"), py::arg("grid") = 6, py::arg("workers") = 0,
        py::call_guard<py::gil_scoped_release>());
}
