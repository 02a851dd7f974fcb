#include "auvmpc/collocation.hpp"

#include "auvmpc/energy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace auvmpc {

void CollocationProblem::validate() const {
    if (segments < 2) throw std::invalid_argument("collocation: need at least 2 segments");
    if (xf < x0) throw std::invalid_argument("collocation: destination lies behind the start");
    if (u0 < 0.0) throw std::invalid_argument("collocation: initial speed must be non-negative");
    if (!(thrust_min < thrust_max)) throw std::invalid_argument("collocation: empty thrust bounds");
    params.validate();
}

namespace {

/// Node thrusts T_0..T_n followed by the travel time scaled by t_scale.
class Transcription {
public:
    Transcription(const CollocationProblem& pb, double t_scale)
        : pb_(pb),
          n_(pb.segments),
          t_scale_(t_scale),
          mass_(pb.params.surge_mass()),
          drag_(pb.params.X_uu),
          cp_(pb.params.power_ratio()),
          hover_(heave_hover_power(pb.params)),
          x_(n_ + 1),
          u_(n_ + 1) {}

    int nodes() const { return n_ + 1; }
    double travel_time(std::span<const double> z) const { return z[n_ + 1] * t_scale_; }

    /// Trapezoidal velocity update: solves v + c v|v| = rhs for v.
    static double implicit_speed(double rhs, double c) {
        const double a = std::abs(rhs);
        const double v = 2.0 * a / (1.0 + std::sqrt(1.0 + 4.0 * c * a));
        return std::copysign(v, rhs);
    }

    void simulate(std::span<const double> z) const {
        const double h = travel_time(z) / n_;
        const double alpha = h / (2.0 * mass_);
        const double c = alpha * drag_;
        x_[0] = pb_.x0;
        u_[0] = pb_.u0;
        for (int k = 0; k < n_; ++k) {
            const double uk = u_[k];
            const double rhs = uk + alpha * (z[k] - drag_ * std::abs(uk) * uk + z[k + 1]);
            u_[k + 1] = implicit_speed(rhs, c);
            x_[k + 1] = x_[k] + 0.5 * h * (uk + u_[k + 1]);
        }
    }

    double pair_power(double T) const {
        const double a = 0.5 * std::abs(T);
        return 2.0 * cp_ * a * std::sqrt(a);
    }
    double pair_power_derivative(double T) const {
        return std::copysign(1.5 * cp_ * std::sqrt(0.5 * std::abs(T)), T);
    }

    double energy(std::span<const double> z, std::span<double> grad) const {
        const double t = travel_time(z);
        const double h = t / n_;
        double sum = 0.0;
        for (int k = 0; k <= n_; ++k) {
            const double w = (k == 0 || k == n_) ? 0.5 : 1.0;
            sum += w * pair_power(z[k]);
            if (!grad.empty()) grad[k] = w * h * pair_power_derivative(z[k]);
        }
        if (!grad.empty()) grad[n_ + 1] = (sum / n_ + hover_) * t_scale_;
        return h * sum + hover_ * t;
    }

    /// x_n - x_f, with its gradient accumulated into grad scaled by `weight`.
    double terminal(std::span<const double> z, std::span<double> grad, double weight) const {
        simulate(z);
        const double value = x_[n_] - pb_.xf;
        if (grad.empty() || weight == 0.0) return value;

        const double t = travel_time(z);
        const double h = t / n_;
        const double alpha = h / (2.0 * mass_);
        const double c = alpha * drag_;
        double bar_x = 1.0, bar_u = 0.0, bar_h = 0.0;
        for (int k = n_ - 1; k >= 0; --k) {
            const double uk = u_[k], v = u_[k + 1];
            double bar_v = bar_u + bar_x * 0.5 * h;
            double bar_uk = bar_x * 0.5 * h;
            bar_h += bar_x * 0.5 * (uk + v);
            const double denom = 1.0 + 2.0 * c * std::abs(v);
            const double bar_rhs = bar_v / denom;
            const double bar_c = -bar_v * v * std::abs(v) / denom;
            bar_uk += bar_rhs * (1.0 - alpha * 2.0 * drag_ * std::abs(uk));
            grad[k] += weight * bar_rhs * alpha;
            grad[k + 1] += weight * bar_rhs * alpha;
            const double bar_alpha = bar_rhs * (z[k] - drag_ * std::abs(uk) * uk + z[k + 1]) + bar_c * drag_;
            bar_h += bar_alpha / (2.0 * mass_);
            bar_u = bar_uk;
        }
        grad[n_ + 1] += weight * bar_h / n_ * t_scale_;
        return value;
    }

    const std::vector<double>& x() const { return x_; }
    const std::vector<double>& u() const { return u_; }

private:
    const CollocationProblem& pb_;
    int n_;
    double t_scale_;
    double mass_, drag_, cp_, hover_;
    mutable std::vector<double> x_, u_;
};

}  // namespace

CollocationSolution solve_dc(const CollocationProblem& pb) {
    pb.validate();
    CollocationSolution sol;
    const double distance = pb.xf - pb.x0;
    if (distance == 0.0) {
        sol.t = {0.0};
        sol.x = {pb.x0};
        sol.u = {pb.u0};
        sol.thrust = {0.0};
        sol.converged = true;
        sol.diagnostics = "trivial: already at destination";
        return sol;
    }

    const int n = pb.segments;
    const double u_star = static_optimal_velocity(pb.params);
    const double t_scale = distance / std::max(u_star, 0.5 * (u_star + pb.u0));
    Transcription tr(pb, t_scale);

    Bounds box;
    box.lower.assign(n + 2, pb.thrust_min);
    box.upper.assign(n + 2, pb.thrust_max);
    box.lower[n + 1] = 1e-6;
    box.upper[n + 1] = 1e3;

    // start from steady cruise at u*
    std::vector<double> z(n + 2, std::clamp(pb.params.X_uu * u_star * u_star, pb.thrust_min, pb.thrust_max));
    z[n + 1] = 1.0;

    double lambda = 0.0;
    double mu = 10.0;
    std::vector<double> g_tmp(n + 2);
    double prev_violation = std::abs(tr.terminal(z, {}, 0.0));
    SolverResult inner;
    for (int outer = 0; outer < pb.max_outer_iterations; ++outer) {
        Objective lagrangian = [&](std::span<const double> zz, std::span<double> g) {
            const double e = tr.energy(zz, g);
            if (g.empty()) {
                const double cv = tr.terminal(zz, {}, 0.0);
                return e + lambda * cv + 0.5 * mu * cv * cv;
            }
            // the terminal gradient weight depends on the constraint value itself
            const double cv = tr.terminal(zz, {}, 0.0);
            tr.terminal(zz, g, lambda + mu * cv);
            return e + lambda * cv + 0.5 * mu * cv * cv;
        };
        inner = minimize_box(lagrangian, box, z, pb.inner);
        z = inner.x;
        sol.inner_iterations += inner.iterations;
        sol.outer_iterations = outer + 1;

        const double cv = tr.terminal(z, {}, 0.0);
        lambda += mu * cv;
        if (std::abs(cv) < pb.constraint_tolerance && inner.status == SolverStatus::converged) {
            sol.converged = true;
            break;
        }
        if (std::abs(cv) > 0.25 * prev_violation) mu = std::min(mu * 10.0, 1e8);
        prev_violation = std::abs(cv);
    }

    // KKT residual of E + lambda * c over the scaled box
    std::fill(g_tmp.begin(), g_tmp.end(), 0.0);
    sol.energy = tr.energy(z, g_tmp);
    sol.terminal_error = tr.terminal(z, g_tmp, lambda);
    double pg = 0.0;
    for (int i = 0; i < n + 2; ++i) {
        const double step = std::clamp(z[i] - g_tmp[i], box.lower[i], box.upper[i]) - z[i];
        pg = std::max(pg, std::abs(step));
    }
    sol.stationarity = pg;
    sol.multiplier = lambda;
    sol.travel_time = tr.travel_time(z);

    tr.simulate(z);
    const double h = sol.travel_time / n;
    sol.t.resize(n + 1);
    for (int k = 0; k <= n; ++k) sol.t[k] = k * h;
    sol.x = tr.x();
    sol.u = tr.u();
    sol.thrust.assign(z.begin(), z.begin() + n + 1);
    sol.max_defect = trapezoid_defect(sol, pb.params);

    char buf[256];
    std::snprintf(buf, sizeof buf, "outer=%d inner=%d |c|=%.3g kkt=%.3g status=%s", sol.outer_iterations,
                  sol.inner_iterations, std::abs(sol.terminal_error), sol.stationarity,
                  to_string(inner.status).c_str());
    sol.diagnostics = buf;
    return sol;
}

double trapezoid_defect(const CollocationSolution& sol, const VehicleParams& p) {
    const double M = p.surge_mass();
    auto accel = [&](double T, double u) { return (T - p.X_uu * std::abs(u) * u) / M; };
    double worst = 0.0;
    for (std::size_t k = 0; k + 1 < sol.t.size(); ++k) {
        const double h = sol.t[k + 1] - sol.t[k];
        const double dx = sol.x[k + 1] - sol.x[k] - 0.5 * h * (sol.u[k] + sol.u[k + 1]);
        const double du = sol.u[k + 1] - sol.u[k] -
                          0.5 * h * (accel(sol.thrust[k], sol.u[k]) + accel(sol.thrust[k + 1], sol.u[k + 1]));
        worst = std::max({worst, std::abs(dx), std::abs(du)});
    }
    return worst;
}

double resample_oracle(double x_remaining, double u_start, const VehicleParams& params, int segments) {
    if (x_remaining < 0.0 || u_start < 0.0)
        throw std::invalid_argument("resample_oracle: remaining distance and speed must be non-negative");
    CollocationProblem pb;
    pb.segments = segments;
    pb.x0 = 0.0;
    pb.xf = x_remaining;
    pb.u0 = u_start;
    pb.params = params;
    return solve_dc(pb).energy;
}

void CollocationSolution::write_csv(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "k,t,x,u,T_total\n";
    char buf[160];
    for (std::size_t k = 0; k < t.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%zu,%.9g,%.9g,%.9g,%.9g\n", k, t[k], x[k], u[k], thrust[k]);
        out << buf;
    }
}

}  // namespace auvmpc
