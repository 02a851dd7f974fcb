#pragma once

#include "auvmpc/box_solver.hpp"
#include "auvmpc/vehicle.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace auvmpc {

/// Reduced surge trajectory-optimization problem with free final time.
struct CollocationProblem {
    int segments = 300;
    double x0 = 0.0;
    double xf = 10.0;
    double u0 = 0.0;
    double thrust_min = -15.72;
    double thrust_max = 15.72;
    VehicleParams params;

    /// Outer augmented-Lagrangian iterations and inner solver settings.
    int max_outer_iterations = 30;
    double constraint_tolerance = 1e-9;
    SolverSettings inner{
        .max_iterations = 20000, .tolerance = 1e-9, .cost_tolerance = 0.0, .nonmonotone_memory = 10};

    void validate() const;
};

struct CollocationSolution {
    std::vector<double> t;
    std::vector<double> x;
    std::vector<double> u;
    std::vector<double> thrust;  // T_total at each node
    double energy = 0.0;         // [J]
    double travel_time = 0.0;    // [s]
    double multiplier = 0.0;     // of the terminal-position constraint
    double max_defect = 0.0;     // worst trapezoidal defect of the returned trajectory
    double stationarity = 0.0;   // projected gradient of the Lagrangian (scaled variables)
    double terminal_error = 0.0; // x_n - x_f
    int outer_iterations = 0;
    int inner_iterations = 0;
    bool converged = false;
    std::string diagnostics;

    void write_csv(const std::filesystem::path& path) const;
};

/// Trapezoidal collocation of the surge problem. The implicit trapezoidal
/// velocity defect is solved exactly on every segment, so the optimizer works
/// on node thrusts and travel time only; the terminal position is enforced by
/// an augmented Lagrangian. Energy is the trapezoidal quadrature of
/// 2 P(T/2) + P_hover over the trip.
CollocationSolution solve_dc(const CollocationProblem& problem);

/// Oracle energy from an intermediate state: x_remaining to go at speed u_start.
double resample_oracle(double x_remaining, double u_start, const VehicleParams& params,
                       int segments = 300);

/// Recomputes the worst trapezoidal defect of a trajectory with the full-space formulas.
double trapezoid_defect(const CollocationSolution& sol, const VehicleParams& params);

}  // namespace auvmpc
