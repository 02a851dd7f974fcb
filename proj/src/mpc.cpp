#include "auvmpc/mpc.hpp"

#include "auvmpc/dynamics.hpp"
#include "auvmpc/energy.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace auvmpc {

void MpcConfig::validate() const {
    if (horizon < 1) throw std::invalid_argument("mpc: horizon must be at least 1");
    if (!(dt > 0.0)) throw std::invalid_argument("mpc: dt must be positive");
    if (!(thrust_min < thrust_max)) throw std::invalid_argument("mpc: thrust_min must be below thrust_max");
    if (!(speed_floor > 0.0)) throw std::invalid_argument("mpc: speed_floor must be positive");
    if (solver.max_iterations < 1) throw std::invalid_argument("mpc: max_iterations must be positive");
}

void SwitchConfig::validate(double u_star, double destination) const {
    if (!(u_low < u_star && u_star < u_high))
        throw std::invalid_argument("switch: thresholds must bracket the static optimum");
    if (!(x_switch < destination)) throw std::invalid_argument("switch: x_switch must precede x_f");
}

double SwitchConfig::default_margin(const VehicleParams& p) {
    const double u_star = static_optimal_velocity(p);
    // coast under quadratic drag: u(t) = u* / (1 + k u* t), k = X_uu / (m - X_du)
    const double k = p.X_uu / p.surge_mass();
    const double t_brake = 3.0 / (k * u_star);
    return 1.5 * u_star * t_brake;
}

SwitchConfig SwitchConfig::defaults(const VehicleParams& p, double destination) {
    const double u_star = static_optimal_velocity(p);
    return {0.95 * u_star, 1.05 * u_star, destination - default_margin(p)};
}

// ---------------------------------------------------------------------------
// cost functions

namespace {

double pair_power(double thrust, double cp) {
    const double h = 0.5 * std::abs(thrust);
    return 2.0 * cp * h * std::sqrt(h);
}

double pair_power_derivative(double thrust, double cp) {
    const double h = 0.5 * std::abs(thrust);
    return std::copysign(1.5 * cp * std::sqrt(h), thrust);
}

}  // namespace

double tmpc_cost(double u_ref, const SurgeState& s0, const SurgeModel& model,
                 std::span<const double> inputs, const MpcConfig& cfg) {
    if (static_cast<int>(inputs.size()) < cfg.horizon)
        throw std::invalid_argument("tmpc_cost: fewer inputs than the horizon");
    SurgeState s = s0;
    double J = 0.0;
    for (int k = 0; k < cfg.horizon; ++k) {
        s = model.step(s, inputs[k], cfg.dt);
        J += (u_ref - s.u) * (u_ref - s.u);
    }
    return J;
}

double stage_cost(std::span<const double> inputs, const MpcConfig& cfg, const VehicleParams& p) {
    if (static_cast<int>(inputs.size()) < cfg.horizon)
        throw std::invalid_argument("stage_cost: fewer inputs than the horizon");
    const double cp = p.power_ratio();
    const double hover = heave_hover_power(p);
    double J = 0.0;
    for (int k = 0; k < cfg.horizon; ++k) J += (pair_power(inputs[k], cp) + hover) * cfg.dt;
    return J;
}

double terminal_cost(const SurgeState& sN, const MpcConfig& cfg, const VehicleParams& p) {
    const double remaining = std::max(cfg.destination - sN.x, 0.0);
    const double v = std::max(sN.u, cfg.speed_floor);
    return remaining / v * (heave_hover_power(p) + cruise_power_coefficient(p) * v * v * v);
}

double eompc_cost(const SurgeState& s0, const SurgeModel& model, std::span<const double> inputs,
                  const MpcConfig& cfg, const VehicleParams& p) {
    const auto traj = surge_rollout(s0, model, inputs.first(cfg.horizon), cfg.dt);
    return stage_cost(inputs, cfg, p) + terminal_cost(traj.back(), cfg, p);
}

HorizonCost::HorizonCost(CostKind kind, const VehicleParams& p, const MpcConfig& cfg, double u_ref)
    : kind_(kind),
      params_(p),
      cfg_(cfg),
      u_ref_(u_ref),
      cp_(p.power_ratio()),
      hover_(heave_hover_power(p)),
      cruise_a_(cruise_power_coefficient(p)),
      cruise_speed_(kind == CostKind::tracking ? u_ref : static_optimal_velocity(p)),
      model_(p, FrozenContext{}),
      s0_{},
      traj_(cfg.horizon + 1),
      pre_(cfg.horizon) {
    cfg_.validate();
}

void HorizonCost::reset(const SurgeState& s0, const FrozenContext& ctx) {
    s0_ = s0;
    model_ = SurgeModel(params_, ctx);
}

double HorizonCost::operator()(std::span<const double> T, std::span<double> grad) const {
    const int N = cfg_.horizon;
    const double dt = cfg_.dt;
    const double M = model_.mass(), D = model_.drag(), bias = model_.bias();
    const double ku = model_.kin_u(), k0 = model_.kin_0();

    traj_[0] = s0_;
    double J = 0.0;
    for (int k = 0; k < N; ++k) {
        const SurgeState& s = traj_[k];
        pre_[k] = s.u + dt * (T[k] - D * std::abs(s.u) * s.u - bias) / M;
        traj_[k + 1] = {s.x + dt * (ku * s.u + k0), std::max(0.0, pre_[k])};
        if (kind_ == CostKind::tracking) {
            const double e = u_ref_ - traj_[k + 1].u;
            J += e * e;
        } else {
            J += (pair_power(T[k], cp_) + hover_) * dt;
        }
    }

    const SurgeState& sN = traj_[N];
    double lam_x = 0.0, lam_u = 0.0;
    if (kind_ == CostKind::energy_optimal) {
        const double gap = cfg_.destination - sN.x;
        const double remaining = std::max(gap, 0.0);
        const double v = std::max(sN.u, cfg_.speed_floor);
        const double per_metre = hover_ / v + cruise_a_ * v * v;
        J += remaining * per_metre;
        if (gap > 0.0) lam_x = -per_metre;
        if (sN.u > cfg_.speed_floor) lam_u = remaining * (-hover_ / (v * v) + 2.0 * cruise_a_ * v);
    }
    if (grad.empty()) return J;

    for (int k = N - 1; k >= 0; --k) {
        if (kind_ == CostKind::tracking) lam_u += -2.0 * (u_ref_ - traj_[k + 1].u);
        const bool clamped = pre_[k] < 0.0;
        const double du_dT = clamped ? 0.0 : dt / M;
        const double du_du = clamped ? 0.0 : 1.0 - dt * 2.0 * D * std::abs(traj_[k].u) / M;
        grad[k] = lam_u * du_dT;
        if (kind_ == CostKind::energy_optimal) grad[k] += pair_power_derivative(T[k], cp_) * dt;
        lam_u = lam_u * du_du + lam_x * dt * ku;
    }
    for (std::size_t k = N; k < grad.size(); ++k) grad[k] = 0.0;
    return J;
}

HorizonSolution solve_horizon(const HorizonCost& cost, const MpcConfig& cfg,
                              std::span<const double> warm_start) {
    const std::size_t N = static_cast<std::size_t>(cfg.horizon);
    const Bounds box = Bounds::uniform(N, cfg.thrust_min, cfg.thrust_max);
    const SurgeModel& model = cost.model();

    const double cruise_speed = cost.cruise_speed();
    const double cruise = std::clamp(model.drag() * cruise_speed * cruise_speed + model.bias(),
                                     cfg.thrust_min, cfg.thrust_max);

    std::vector<std::vector<double>> candidates;
    candidates.emplace_back(N, 0.0);
    candidates.emplace_back(N, cruise);
    if (warm_start.size() >= N) {
        std::vector<double> w(warm_start.begin(), warm_start.begin() + N);
        box.project(w);
        candidates.push_back(std::move(w));
    }
    std::size_t best = 0;
    double best_cost = cost(candidates[0], {});
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        const double c = cost(candidates[i], {});
        if (c < best_cost) {
            best_cost = c;
            best = i;
        }
    }

    Objective f = [&cost](std::span<const double> x, std::span<double> g) { return cost(x, g); };
    SolverResult r = minimize_box(f, box, candidates[best], cfg.solver);
    return {std::move(r.x), r.cost, r.iterations, r.evaluations, r.status};
}

// ---------------------------------------------------------------------------
// controllers

HorizonController::HorizonController(CostKind kind, const VehicleParams& p, MpcConfig cfg)
    : cfg_(cfg), cost_(kind, p, cfg, static_optimal_velocity(p)) {}

std::string HorizonController::name() const {
    return cost_.kind() == CostKind::tracking ? "T-MPC" : "EO-MPC";
}

void HorizonController::shift_warm_start() {
    if (warm_.empty()) return;
    // drop the applied input and repeat the last one
    std::rotate(warm_.begin(), warm_.begin() + 1, warm_.end());
    if (warm_.size() > 1) warm_.back() = warm_[warm_.size() - 2];
}

ControlDecision HorizonController::decide(const VehicleState& s) {
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    cost_.reset({s.x(), std::max(0.0, s.u())}, FrozenContext::from_state(s));
    HorizonSolution sol = solve_horizon(cost_, cfg_, cfg_.warm_start ? std::span<const double>(warm_)
                                                                     : std::span<const double>());
    const double elapsed = std::chrono::duration<double>(clock::now() - start).count();

    warm_ = sol.inputs;
    shift_warm_start();
    ControlDecision d;
    d.thrust = std::clamp(sol.inputs.front(), cfg_.thrust_min, cfg_.thrust_max);
    d.solver_invoked = true;
    d.predicted_cost = sol.cost;
    d.solve_time = elapsed;
    d.iterations = sol.iterations;
    d.evaluations = sol.evaluations;
    d.status = sol.status;
    return d;
}

bool rteo_should_solve(double x_t, double u_t, const RteoHistory& h, double u_star,
                       const SwitchConfig& sw) {
    if (x_t >= sw.x_switch) return true;
    if (!h.u_initial || !h.u_prev || !h.thrust_prev) return true;
    if (*h.u_initial < u_star) return u_t < sw.u_low || *h.u_prev < u_t;
    if (!h.thrust_prev2) return true;
    return u_t > sw.u_high || *h.thrust_prev2 < *h.thrust_prev;
}

RteoController::RteoController(const VehicleParams& p, MpcConfig cfg, SwitchConfig sw)
    : eo_(CostKind::energy_optimal, p, cfg), sw_(sw), u_star_(static_optimal_velocity(p)) {
    sw_.validate(u_star_, cfg.destination);
}

ControlDecision RteoController::decide(const VehicleState& s) {
    const double u_t = s.u();
    if (!history_.u_initial) history_.u_initial = u_t;

    ControlDecision d;
    if (rteo_should_solve(s.x(), u_t, history_, u_star_, sw_)) {
        d = eo_.decide(s);
    } else {
        d.thrust = *history_.thrust_prev;
        d.solver_invoked = false;
        eo_.shift_warm_start();
    }
    history_.thrust_prev2 = history_.thrust_prev;
    history_.thrust_prev = d.thrust;
    history_.u_prev = u_t;
    return d;
}

}  // namespace auvmpc
