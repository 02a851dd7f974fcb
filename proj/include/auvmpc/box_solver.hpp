#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace auvmpc {

/// Objective for a box-constrained problem. When `grad` is non-empty the
/// callee must fill it with the gradient at `x`.
using Objective = std::function<double(std::span<const double> x, std::span<double> grad)>;

struct Bounds {
    std::vector<double> lower;
    std::vector<double> upper;

    static Bounds uniform(std::size_t n, double lo, double hi) {
        return {std::vector<double>(n, lo), std::vector<double>(n, hi)};
    }
    std::size_t size() const { return lower.size(); }
    void project(std::span<double> x) const;
};

struct SolverSettings {
    int max_iterations = 300;
    /// Stop when the infinity norm of the projected-gradient step is below this.
    double tolerance = 1e-7;
    /// Also stop when the best cost improves by less than
    /// cost_tolerance * (1 + |f|) over stall_window iterations; this ends
    /// zig-zagging across kinks of piecewise-smooth costs.
    double cost_tolerance = 1e-10;
    int stall_window = 10;
    int nonmonotone_memory = 8;
    int max_backtracks = 30;
    /// Coordinate-search fallback: initial step and floor relative to the box
    /// width, evaluation budget per variable, and how often it may be entered.
    double pattern_step = 1e-3;
    double pattern_tolerance = 1e-7;
    int pattern_budget_per_variable = 20;
    int max_fallbacks = 2;
};

enum class SolverStatus { converged, iteration_limit, stalled };

std::string to_string(SolverStatus s);

struct SolverResult {
    std::vector<double> x;
    double cost = 0.0;
    int iterations = 0;
    int evaluations = 0;
    /// Infinity norm of P(x - g) - x at the returned point.
    double projected_gradient = 0.0;
    SolverStatus status = SolverStatus::converged;
};

/// Spectral projected gradient with a nonmonotone Armijo search. Falls back
/// to compass search along the coordinates if the line search stalls. The
/// returned point is the best one evaluated, so its cost never exceeds the
/// cost at the (projected) starting point.
SolverResult minimize_box(const Objective& f, const Bounds& bounds, std::vector<double> x0,
                          const SolverSettings& settings = {});

}  // namespace auvmpc
