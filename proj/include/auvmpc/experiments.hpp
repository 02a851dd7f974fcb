#pragma once

#include "auvmpc/collocation.hpp"
#include "auvmpc/scenario.hpp"
#include "auvmpc/simulation.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace auvmpc {

/// One closed-loop run condensed to the numbers that end up in reports.
struct RunSummary {
    std::string controller;
    EnergyLedger ledger;
    int steps = 0;
    int solver_calls = 0;
    double avg_solve = 0.0;    // total solve time / control steps [s]
    double total_solve = 0.0;  // [s]
    double max_solve = 0.0;    // [s]
    bool arrived = false;
    std::string error;
    EnvelopeAudit envelope;

    static RunSummary from_log(const SimLog& log, double thrust_bound = 15.72);
};

std::string summary_csv_header();
std::string summary_csv_row(const RunSummary& r);

struct ComparisonReport {
    Scenario scenario;
    CollocationSolution oracle;
    std::vector<SimLog> logs;  // T-MPC, EO-MPC, RTEO-MPC
    std::vector<RunSummary> runs;

    /// Percent energy above the oracle.
    double loss_percent(const RunSummary& r) const;
    std::string table() const;
    /// Oracle first (no solve statistics), then one row per controller.
    void write_summary_csv(const std::filesystem::path& path) const;
};

/// Oracle plus the three controllers on the same scenario. Solve times are
/// averaged over `timing_repeats` identical runs; energies come from the first.
ComparisonReport compare_controllers(const Scenario& sc, int timing_repeats = 1);

struct HorizonPoint {
    int horizon = 0;
    RunSummary run;
    std::string error;  // non-empty when the run failed
};

struct HorizonReport {
    double oracle_energy = 0.0;
    std::vector<HorizonPoint> points;

    std::string table() const;
    void write_csv(const std::filesystem::path& path) const;
};

/// One EO-MPC run per horizon; timing is averaged over `repeats` runs.
HorizonReport sweep_horizon(const Scenario& base, const std::vector<int>& horizons, int repeats = 10);

struct Range {
    double lo = 0.0;
    double hi = 0.0;
    /// n evenly spaced points including both ends (one point: lo).
    std::vector<double> points(int n) const;
};

struct IcCell {
    double x0 = 0.0;
    double u0 = 0.0;
    double oracle = 0.0;     // J*_DC from the cell's initial condition
    double rteo = 0.0;       // closed-loop energies
    double tmpc = 0.0;
    bool near_target = false;  // x_f - x0 <= 1 m
    double envelope_ratio = 0.0;  // worst envelope audit ratio over both runs
    std::string error;

    bool ok() const { return error.empty(); }
    double rteo_gap() const { return rteo - oracle; }
    double tmpc_gap() const { return tmpc - oracle; }
    /// Relative gaps in percent; NaN when the oracle energy is zero.
    double rteo_gap_percent() const;
    double tmpc_gap_percent() const;
};

struct IcReport {
    int grid = 0;
    std::vector<IcCell> cells;  // row-major: x0 outer, u0 inner

    /// Worst relative gaps over successful cells farther than 1 m from the target.
    double worst_rteo_gap_percent() const;
    double worst_tmpc_gap_percent() const;
    int failed_cells() const;

    std::string table() const;
    void write_csv(const std::filesystem::path& path) const;
};

/// grid x grid runs of RTEO-MPC and T-MPC against resample_oracle. Cells are
/// independent and may run on `workers` threads (0: hardware concurrency);
/// results are stored by cell index so the report does not depend on scheduling.
IcReport sweep_initial_conditions(const Scenario& base, Range x0, Range u0, int grid, int workers = 0);

}  // namespace auvmpc
