#include "auvmpc/box_solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace auvmpc {

namespace {

constexpr double kStepMin = 1e-10;
constexpr double kStepMax = 1e10;
constexpr double kArmijo = 1e-4;

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

struct Tracker {
    const Objective& f;
    std::vector<double> best_x;
    double best_cost = std::numeric_limits<double>::infinity();
    int evaluations = 0;

    double operator()(std::span<const double> x, std::span<double> g) {
        const double c = f(x, g);
        ++evaluations;
        if (c < best_cost) {
            best_cost = c;
            best_x.assign(x.begin(), x.end());
        }
        return c;
    }
};

double projected_gradient_norm(const Bounds& b, std::span<const double> x, std::span<const double> g) {
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double t = std::clamp(x[i] - g[i], b.lower[i], b.upper[i]);
        m = std::max(m, std::abs(t - x[i]));
    }
    return m;
}

/// Compass search; returns true if it improved on the incumbent.
bool compass_search(Tracker& eval, const Bounds& b, std::vector<double>& x, double& fx,
                    const SolverSettings& s, int& budget) {
    const std::size_t n = x.size();
    double width = 0.0;
    for (std::size_t i = 0; i < n; ++i) width = std::max(width, b.upper[i] - b.lower[i]);
    double step = s.pattern_step * width;
    const double floor = s.pattern_tolerance * width;
    bool improved = false;
    std::vector<double> trial = x;
    while (step > floor && budget > 0) {
        bool moved = false;
        for (std::size_t i = 0; i < n && budget > 0; ++i) {
            for (double dir : {1.0, -1.0}) {
                trial = x;
                trial[i] = std::clamp(x[i] + dir * step, b.lower[i], b.upper[i]);
                if (trial[i] == x[i]) continue;
                const double ft = eval(trial, {});
                --budget;
                if (ft < fx) {
                    x = trial;
                    fx = ft;
                    moved = improved = true;
                    break;
                }
            }
        }
        if (!moved) step *= 0.5;
    }
    return improved;
}

}  // namespace

void Bounds::project(std::span<double> x) const {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lower[i], upper[i]);
}

std::string to_string(SolverStatus s) {
    switch (s) {
        case SolverStatus::converged: return "converged";
        case SolverStatus::iteration_limit: return "iteration_limit";
        case SolverStatus::stalled: return "stalled";
    }
    return "unknown";
}

SolverResult minimize_box(const Objective& f, const Bounds& bounds, std::vector<double> x,
                          const SolverSettings& settings) {
    const std::size_t n = x.size();
    if (bounds.size() != n || bounds.upper.size() != n)
        throw std::invalid_argument("minimize_box: bounds and start point differ in size");
    for (std::size_t i = 0; i < n; ++i)
        if (!(bounds.lower[i] <= bounds.upper[i]))
            throw std::invalid_argument("minimize_box: lower bound exceeds upper bound");
    bounds.project(x);

    Tracker eval{f, {}, std::numeric_limits<double>::infinity(), 0};
    std::vector<double> g(n), g_new(n), d(n), x_new(n), s(n), y(n);
    double fx = eval(x, g);

    std::deque<double> history{fx};
    double pg = projected_gradient_norm(bounds, x, g);
    double lambda = pg > 0.0 ? std::clamp(1.0 / pg, kStepMin, kStepMax) : 1.0;

    SolverResult result;
    result.status = SolverStatus::iteration_limit;
    int iter = 0;
    int fallbacks = 0;
    std::deque<double> best_trace;
    for (; iter < settings.max_iterations; ++iter) {
        if (pg <= settings.tolerance) {
            result.status = SolverStatus::converged;
            break;
        }
        for (std::size_t i = 0; i < n; ++i)
            d[i] = std::clamp(x[i] - lambda * g[i], bounds.lower[i], bounds.upper[i]) - x[i];
        const double slope = dot(g, d);
        const double f_ref = *std::max_element(history.begin(), history.end());

        double alpha = 1.0;
        double f_new = 0.0;
        bool accepted = false;
        for (int backtrack = 0; backtrack < settings.max_backtracks; ++backtrack) {
            for (std::size_t i = 0; i < n; ++i) x_new[i] = x[i] + alpha * d[i];
            f_new = eval(x_new, g_new);
            if (f_new <= f_ref + kArmijo * alpha * slope) {
                accepted = true;
                break;
            }
            // safeguarded quadratic backtrack
            const double denom = 2.0 * (f_new - fx - alpha * slope);
            double a_q = denom > 0.0 ? -slope * alpha * alpha / denom : 0.5 * alpha;
            alpha = std::clamp(a_q, 0.1 * alpha, 0.5 * alpha);
        }

        if (!accepted || slope >= 0.0) {
            int budget = settings.pattern_budget_per_variable * static_cast<int>(n);
            x = eval.best_x;
            fx = eval.best_cost;
            if (fallbacks++ >= settings.max_fallbacks ||
                !compass_search(eval, bounds, x, fx, settings, budget)) {
                result.status = SolverStatus::stalled;
                break;
            }
            fx = eval(x, g);
            history.assign(1, fx);
            pg = projected_gradient_norm(bounds, x, g);
            lambda = pg > 0.0 ? std::clamp(1.0 / pg, kStepMin, kStepMax) : 1.0;
            continue;
        }

        for (std::size_t i = 0; i < n; ++i) {
            s[i] = x_new[i] - x[i];
            y[i] = g_new[i] - g[i];
        }
        const double sy = dot(s, y);
        lambda = sy > 0.0 ? std::clamp(dot(s, s) / sy, kStepMin, kStepMax) : kStepMax;
        x.swap(x_new);
        g.swap(g_new);
        fx = f_new;
        history.push_back(fx);
        if (static_cast<int>(history.size()) > settings.nonmonotone_memory) history.pop_front();
        pg = projected_gradient_norm(bounds, x, g);

        best_trace.push_back(eval.best_cost);
        if (static_cast<int>(best_trace.size()) > settings.stall_window) {
            const double drop = best_trace.front() - best_trace.back();
            best_trace.pop_front();
            if (drop <= settings.cost_tolerance * (1.0 + std::abs(eval.best_cost))) {
                result.status = SolverStatus::converged;
                ++iter;
                break;
            }
        }
    }

    // The tracked minimum may differ from the last iterate under the nonmonotone search.
    if (eval.best_cost < fx) {
        x = eval.best_x;
        fx = eval(x, g);
        pg = projected_gradient_norm(bounds, x, g);
    }
    result.x = std::move(x);
    result.cost = fx;
    result.iterations = iter;
    result.evaluations = eval.evaluations;
    result.projected_gradient = pg;
    return result;
}

}  // namespace auvmpc
