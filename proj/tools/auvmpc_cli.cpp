// Command-line driver: every subcommand reads a scenario file and writes its
// artifacts (trace.csv, summary.csv, table.txt, ...) into an output directory.
#include "auvmpc/collocation.hpp"
#include "auvmpc/experiments.hpp"
#include "auvmpc/scenario.hpp"
#include "auvmpc/simulation.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace auvmpc;

namespace {

struct Common {
    std::string scenario;
    std::string out_dir;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("scenario", c.scenario, "Scenario file")->required()->check(CLI::ExistingFile);
    cmd->add_option("out_dir", c.out_dir, "Output directory (created if missing)")->required();
}

fs::path prepare(const Common& c) {
    fs::path out(c.out_dir);
    fs::create_directories(out);
    return out;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << text;
}

void emit_table(const fs::path& dir, const std::string& text) {
    write_text(dir / "table.txt", text);
    std::cout << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"AUV surge-energy MPC simulator"};
    app.require_subcommand(1);

    Common sim_args, cmp_args, hz_args, ic_args, dc_args;

    auto* sim = app.add_subcommand("simulate", "Closed-loop run of the scenario's controller");
    add_common(sim, sim_args);
    std::string controller_override;
    sim->add_option("-c,--controller", controller_override, "Override controller: tmpc, eompc or rteo");

    auto* cmp = app.add_subcommand("compare", "Oracle and all three controllers on the scenario");
    add_common(cmp, cmp_args);
    int cmp_repeats = 1;
    cmp->add_option("--repeats", cmp_repeats, "Timing repeats per controller")->check(CLI::PositiveNumber);

    auto* hz = app.add_subcommand("sweep-horizon", "EO-MPC energy and solve time versus horizon");
    add_common(hz, hz_args);
    std::vector<int> horizons{5, 10, 15, 20, 25};
    int hz_repeats = 10;
    hz->add_option("--horizons", horizons, "Horizon lengths")->check(CLI::PositiveNumber);
    hz->add_option("--repeats", hz_repeats, "Timing repeats per horizon")->check(CLI::PositiveNumber);

    auto* ic = app.add_subcommand("sweep-ic", "RTEO-MPC and T-MPC over a grid of initial conditions");
    add_common(ic, ic_args);
    std::vector<double> x0_range{0.0, 10.0}, u0_range{0.0, 0.5};
    int grid = 6, workers = 0;
    ic->add_option("--x0-range", x0_range, "x0 lower and upper bound")->expected(2);
    ic->add_option("--u0-range", u0_range, "u0 lower and upper bound")->expected(2);
    ic->add_option("--grid", grid, "Points per axis")->check(CLI::PositiveNumber);
    ic->add_option("--workers", workers, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);

    auto* dc = app.add_subcommand("oracle", "Trajectory-optimization baseline for the scenario");
    add_common(dc, dc_args);
    int segments = 300;
    dc->add_option("--segments", segments, "Collocation segments")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim) {
            Scenario sc = load_scenario(sim_args.scenario);
            if (!controller_override.empty()) sc.controller = parse_controller_kind(controller_override);
            const fs::path out = prepare(sim_args);
            const SimLog log = run_scenario(sc);
            log.write_trace_csv(out / "trace.csv");
            const RunSummary r = RunSummary::from_log(log);
            write_text(out / "summary.csv", summary_csv_header() + "\n" + summary_csv_row(r) + "\n");
            const EnvelopeAudit audit = audit_envelope(log, sc.mpc.thrust_max);
            char buf[512];
            std::snprintf(buf, sizeof buf,
                          "%s: energy %.3f J (surge %.3f, heave %.3f, pitch %.4f, yaw %.4f), travel %.2f s\n"
                          "solver calls %d/%d, total solve %.3e s, max solve %.3e s\n"
                          "envelope worst ratio %.3f (%s at t=%.1f s)%s\n",
                          r.controller.c_str(), r.ledger.total, r.ledger.surge, r.ledger.heave, r.ledger.pitch,
                          r.ledger.yaw, r.ledger.travel_time, r.solver_calls, r.steps, r.total_solve,
                          r.max_solve, audit.worst_ratio, audit.worst_channel.c_str(), audit.worst_time,
                          r.error.empty() ? "" : ("\nwarning: " + r.error).c_str());
            emit_table(out, buf);
            return r.error.empty() ? 0 : 2;
        }
        if (*cmp) {
            const Scenario sc = load_scenario(cmp_args.scenario);
            const fs::path out = prepare(cmp_args);
            const ComparisonReport rep = compare_controllers(sc, cmp_repeats);
            rep.write_summary_csv(out / "summary.csv");
            for (const auto& log : rep.logs) {
                std::string name = log.controller;
                std::erase(name, '-');
                log.write_trace_csv(out / ("trace_" + name + ".csv"));
            }
            rep.oracle.write_csv(out / "oracle.csv");
            emit_table(out, rep.table());
            return 0;
        }
        if (*hz) {
            const Scenario sc = load_scenario(hz_args.scenario);
            const fs::path out = prepare(hz_args);
            const HorizonReport rep = sweep_horizon(sc, horizons, hz_repeats);
            rep.write_csv(out / "summary.csv");
            emit_table(out, rep.table());
            return 0;
        }
        if (*ic) {
            const Scenario sc = load_scenario(ic_args.scenario);
            const fs::path out = prepare(ic_args);
            const IcReport rep =
                sweep_initial_conditions(sc, {x0_range[0], x0_range[1]}, {u0_range[0], u0_range[1]}, grid, workers);
            rep.write_csv(out / "summary.csv");
            emit_table(out, rep.table());
            return 0;
        }
        if (*dc) {
            const Scenario sc = load_scenario(dc_args.scenario);
            const fs::path out = prepare(dc_args);
            CollocationProblem pb;
            pb.segments = segments;
            pb.x0 = sc.x0;
            pb.xf = sc.xf;
            pb.u0 = sc.u0;
            pb.thrust_min = sc.mpc.thrust_min;
            pb.thrust_max = sc.mpc.thrust_max;
            pb.params = sc.vehicle;
            const CollocationSolution sol = solve_dc(pb);
            sol.write_csv(out / "trace.csv");
            char buf[512];
            std::snprintf(buf, sizeof buf, "DC,,,,,%.9g,%.6g,,,,%d,%d\n", sol.energy, sol.travel_time, segments,
                          sol.converged ? 1 : 0);
            write_text(out / "summary.csv", summary_csv_header() + "\n" + buf);
            std::snprintf(buf, sizeof buf,
                          "DC oracle (%d segments): energy %.4f J, travel %.3f s\n"
                          "terminal error %.2e m, max defect %.2e, stationarity %.2e, %s\n",
                          segments, sol.energy, sol.travel_time, sol.terminal_error, sol.max_defect,
                          sol.stationarity, sol.converged ? "converged" : "NOT converged");
            emit_table(out, std::string(buf) + sol.diagnostics + "\n");
            return sol.converged ? 0 : 2;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
