#include "auvmpc/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace auvmpc {

namespace {

std::string format(const char* fmt, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, fmt, args...);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

RunSummary timed_run(const Scenario& sc, int repeats, SimLog* keep = nullptr) {
    if (repeats < 1) throw std::invalid_argument("timing repeats must be positive");
    SimLog first = run_scenario(sc);
    RunSummary r = RunSummary::from_log(first, sc.mpc.thrust_max);
    double total = first.total_solve_time, worst = first.max_solve_time;
    for (int i = 1; i < repeats; ++i) {
        const SimLog again = run_scenario(sc);
        total += again.total_solve_time;
        worst += again.max_solve_time;
    }
    r.total_solve = total / repeats;
    r.max_solve = worst / repeats;
    r.avg_solve = r.steps > 0 ? r.total_solve / r.steps : 0.0;
    if (keep) *keep = std::move(first);
    return r;
}

double percent(double value, double reference) {
    if (reference == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return 100.0 * (value - reference) / reference;
}

}  // namespace

RunSummary RunSummary::from_log(const SimLog& log, double thrust_bound) {
    RunSummary r;
    r.controller = log.controller;
    r.ledger = log.ledger;
    r.steps = static_cast<int>(log.steps.size());
    r.solver_calls = log.solver_calls;
    r.avg_solve = log.average_solve_time();
    r.total_solve = log.total_solve_time;
    r.max_solve = log.max_solve_time;
    r.arrived = log.arrived;
    r.error = log.error;
    r.envelope = audit_envelope(log, thrust_bound);
    if (r.error.empty() && log.max_time_exceeded) r.error = "max time exceeded";
    return r;
}

std::string summary_csv_header() {
    return "controller,surge_J,heave_J,pitch_J,yaw_J,total_J,travel_time_s,avg_solve_s,total_solve_s,"
           "solver_calls,steps,arrived";
}

std::string summary_csv_row(const RunSummary& r) {
    const auto& e = r.ledger;
    return format("%s,%.9g,%.9g,%.9g,%.9g,%.9g,%.6g,%.6e,%.6e,%d,%d,%d", r.controller.c_str(), e.surge,
                  e.heave, e.pitch, e.yaw, e.total, e.travel_time, r.avg_solve, r.total_solve,
                  r.solver_calls, r.steps, r.arrived ? 1 : 0);
}

// ---------------------------------------------------------------------------

double ComparisonReport::loss_percent(const RunSummary& r) const {
    return percent(r.ledger.total, oracle.energy);
}

std::string ComparisonReport::table() const {
    std::ostringstream os;
    os << format("Scenario: x0 = %g m, xf = %g m, u0 = %g m/s, dt = %g s\n\n", scenario.x0, scenario.xf,
                 scenario.u0, scenario.dt);
    os << format("%-10s %12s %12s %9s %14s %14s %12s\n", "method", "t_travel[s]", "energy[J]", "loss[%]",
                 "avg_solve[s]", "total_solve[s]", "solves");
    os << std::string(89, '-') << '\n';
    os << format("%-10s %12.2f %12.3f %9s %14s %14s %12s\n", "DC", oracle.travel_time, oracle.energy, "-",
                 "-", "-", "-");
    for (const auto& r : runs) {
        os << format("%-10s %12.2f %12.3f %9.2f %14.3e %14.3e %5d/%-6d", r.controller.c_str(),
                     r.ledger.travel_time, r.ledger.total, loss_percent(r), r.avg_solve, r.total_solve,
                     r.solver_calls, r.steps);
        if (!r.error.empty()) os << "  [" << r.error << ']';
        os << '\n';
    }
    return os.str();
}

void ComparisonReport::write_summary_csv(const std::filesystem::path& path) const {
    auto out = open_out(path);
    out << summary_csv_header() << '\n';
    out << format("DC,,,,,%.9g,%.6g,,,,%zu,1\n", oracle.energy, oracle.travel_time,
                  oracle.t.empty() ? std::size_t{0} : oracle.t.size() - 1);
    for (const auto& r : runs) out << summary_csv_row(r) << '\n';
}

ComparisonReport compare_controllers(const Scenario& sc, int timing_repeats) {
    sc.validate();
    ComparisonReport rep;
    rep.scenario = sc;

    CollocationProblem pb;
    pb.x0 = sc.x0;
    pb.xf = sc.xf;
    pb.u0 = sc.u0;
    pb.thrust_min = sc.mpc.thrust_min;
    pb.thrust_max = sc.mpc.thrust_max;
    pb.params = sc.vehicle;
    rep.oracle = solve_dc(pb);

    for (auto kind : {ControllerKind::tracking, ControllerKind::energy_optimal, ControllerKind::real_time}) {
        Scenario s = sc;
        s.controller = kind;
        SimLog log;
        rep.runs.push_back(timed_run(s, timing_repeats, &log));
        rep.logs.push_back(std::move(log));
    }
    return rep;
}

// ---------------------------------------------------------------------------

std::string HorizonReport::table() const {
    std::ostringstream os;
    os << format("EO-MPC horizon sweep (oracle %.3f J)\n\n", oracle_energy);
    os << format("%4s %12s %9s %12s %14s %14s\n", "N", "energy[J]", "gap[%]", "t_travel[s]", "max_solve[s]",
                 "avg_solve[s]");
    os << std::string(70, '-') << '\n';
    for (const auto& p : points) {
        if (!p.error.empty()) {
            os << format("%4d  failed: ", p.horizon) << p.error << '\n';
            continue;
        }
        os << format("%4d %12.3f %9.2f %12.2f %14.3e %14.3e\n", p.horizon, p.run.ledger.total,
                     percent(p.run.ledger.total, oracle_energy), p.run.ledger.travel_time, p.run.max_solve,
                     p.run.avg_solve);
    }
    return os.str();
}

void HorizonReport::write_csv(const std::filesystem::path& path) const {
    auto out = open_out(path);
    out << "horizon," << summary_csv_header() << ",max_solve_s,error\n";
    for (const auto& p : points) {
        RunSummary r = p.run;
        if (r.controller.empty()) r.controller = "EO-MPC";
        out << p.horizon << ',' << summary_csv_row(r) << format(",%.6e,", r.max_solve) << p.error << '\n';
    }
}

HorizonReport sweep_horizon(const Scenario& base, const std::vector<int>& horizons, int repeats) {
    if (horizons.empty()) throw std::invalid_argument("sweep_horizon: no horizons given");
    base.validate();
    HorizonReport rep;
    rep.oracle_energy = resample_oracle(base.xf - base.x0, base.u0, base.vehicle);
    for (int n : horizons) {
        HorizonPoint p;
        p.horizon = n;
        try {
            Scenario s = base;
            s.controller = ControllerKind::energy_optimal;
            s.mpc.horizon = n;
            p.run = timed_run(s, repeats);
        } catch (const std::exception& e) {
            p.error = e.what();
        }
        rep.points.push_back(std::move(p));
    }
    return rep;
}

// ---------------------------------------------------------------------------

std::vector<double> Range::points(int n) const {
    if (n < 1) throw std::invalid_argument("Range::points: need at least one point");
    if (!(hi >= lo)) throw std::invalid_argument("Range::points: hi < lo");
    std::vector<double> v(static_cast<std::size_t>(n), lo);
    for (int i = 1; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    return v;
}

double IcCell::rteo_gap_percent() const { return percent(rteo, oracle); }
double IcCell::tmpc_gap_percent() const { return percent(tmpc, oracle); }

double IcReport::worst_rteo_gap_percent() const {
    double w = -std::numeric_limits<double>::infinity();
    for (const auto& c : cells)
        if (c.ok() && !c.near_target) w = std::max(w, c.rteo_gap_percent());
    return w;
}

double IcReport::worst_tmpc_gap_percent() const {
    double w = -std::numeric_limits<double>::infinity();
    for (const auto& c : cells)
        if (c.ok() && !c.near_target) w = std::max(w, c.tmpc_gap_percent());
    return w;
}

int IcReport::failed_cells() const {
    return static_cast<int>(std::count_if(cells.begin(), cells.end(), [](const IcCell& c) { return !c.ok(); }));
}

std::string IcReport::table() const {
    std::ostringstream os;
    os << "Initial-condition sweep: energy gap vs oracle [%] (* = within 1 m of target)\n\n";
    for (const char* which : {"RTEO-MPC", "T-MPC"}) {
        const bool rteo = which[0] == 'R';
        os << which << '\n' << format("%8s", "x0\\u0");
        for (int j = 0; j < grid; ++j) os << format(" %9.3f", cells[static_cast<std::size_t>(j)].u0);
        os << '\n';
        for (int i = 0; i < grid; ++i) {
            os << format("%8.3f", cells[static_cast<std::size_t>(i * grid)].x0);
            for (int j = 0; j < grid; ++j) {
                const auto& c = cells[static_cast<std::size_t>(i * grid + j)];
                if (!c.ok()) {
                    os << format(" %9s", "FAIL");
                    continue;
                }
                const double g = rteo ? c.rteo_gap_percent() : c.tmpc_gap_percent();
                os << format(" %8.2f%c", g, c.near_target ? '*' : ' ');
            }
            os << '\n';
        }
        os << '\n';
    }
    os << format("worst gap away from target: RTEO-MPC %.2f%%, T-MPC %.2f%%; failed cells: %d\n",
                 worst_rteo_gap_percent(), worst_tmpc_gap_percent(), failed_cells());
    return os.str();
}

void IcReport::write_csv(const std::filesystem::path& path) const {
    auto out = open_out(path);
    out << "x0,u0,oracle_J,rteo_J,tmpc_J,rteo_gap_J,tmpc_gap_J,rteo_gap_pct,tmpc_gap_pct,near_target,envelope_ratio,"
           "error\n";
    for (const auto& c : cells) {
        std::string err = c.error;
        std::replace(err.begin(), err.end(), ',', ';');
        out << format("%.6g,%.6g,%.9g,%.9g,%.9g,%.9g,%.9g,%.6g,%.6g,%d,%.4f,", c.x0, c.u0, c.oracle, c.rteo,
                      c.tmpc, c.rteo_gap(), c.tmpc_gap(), c.rteo_gap_percent(), c.tmpc_gap_percent(),
                      c.near_target ? 1 : 0, c.envelope_ratio)
            << err << '\n';
    }
}

IcReport sweep_initial_conditions(const Scenario& base, Range x0, Range u0, int grid, int workers) {
    if (grid < 1) throw std::invalid_argument("sweep_initial_conditions: grid must be positive");
    if (x0.hi > base.xf) throw std::invalid_argument("sweep_initial_conditions: x0 range beyond destination");
    if (u0.lo < 0.0) throw std::invalid_argument("sweep_initial_conditions: negative initial speed");
    const auto xs = x0.points(grid);
    const auto us = u0.points(grid);

    IcReport rep;
    rep.grid = grid;
    rep.cells.resize(static_cast<std::size_t>(grid * grid));
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            auto& c = rep.cells[static_cast<std::size_t>(i * grid + j)];
            c.x0 = xs[static_cast<std::size_t>(i)];
            c.u0 = us[static_cast<std::size_t>(j)];
            c.near_target = base.xf - c.x0 <= 1.0;
        }

    auto run_cell = [&base](IcCell& c) {
        try {
            c.oracle = resample_oracle(base.xf - c.x0, c.u0, base.vehicle);
            for (auto kind : {ControllerKind::real_time, ControllerKind::tracking}) {
                Scenario s = base;
                s.x0 = c.x0;
                s.u0 = c.u0;
                s.controller = kind;
                const SimLog log = run_scenario(s);
                if (!log.error.empty()) throw std::runtime_error(log.error);
                if (!log.arrived) throw std::runtime_error(to_string(kind) + ": max time exceeded");
                (kind == ControllerKind::real_time ? c.rteo : c.tmpc) = log.ledger.total;
                c.envelope_ratio = std::max(c.envelope_ratio, audit_envelope(log, s.mpc.thrust_max).worst_ratio);
            }
        } catch (const std::exception& e) {
            c.error = e.what();
        }
    };

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t n_workers =
        std::min<std::size_t>(workers > 0 ? static_cast<std::size_t>(workers) : hw, rep.cells.size());
    if (n_workers <= 1) {
        for (auto& c : rep.cells) run_cell(c);
        return rep;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < n_workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t k; (k = next.fetch_add(1)) < rep.cells.size();) run_cell(rep.cells[k]);
        });
    pool.clear();  // joins
    return rep;
}

}  // namespace auvmpc
