#include "doctest.h"

#include "auvmpc/dynamics.hpp"
#include "auvmpc/energy.hpp"
#include "auvmpc/mpc.hpp"
#include "auvmpc/surge_model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

using namespace auvmpc;

namespace {

const VehicleParams P;
const double US = static_optimal_velocity(P);

std::vector<double> constant(double v, int n = 15) { return std::vector<double>(static_cast<std::size_t>(n), v); }

}  // namespace

// ---------------------------------------------------------------------------
// surge prediction

TEST_CASE("surge derivative examples") {
    const FrozenContext zero;
    const auto a = surge_derivative({0.0, 0.0}, zero, 15.72, P);
    CHECK(a.u_dot == doctest::Approx(0.6998).epsilon(1e-4));
    CHECK(a.x_dot == 0.0);

    const auto b = surge_derivative({0.0, US}, zero, P.X_uu * US * US, P);
    CHECK(std::abs(b.u_dot) < 1e-15);
    CHECK(b.x_dot == doctest::Approx(US));

    const SurgeModel m(P, zero);
    CHECK(m.bias() == 0.0);
}

TEST_CASE("surge rollout") {
    const FrozenContext zero;
    const auto rest = surge_rollout({1.0, 0.0}, zero, constant(0.0), 0.1, P);
    CHECK(rest.size() == 16);
    for (const auto& s : rest) {
        CHECK(s.x == 1.0);
        CHECK(s.u == 0.0);
    }

    const auto cruise = surge_rollout({0.0, US}, zero, constant(P.X_uu * US * US), 0.1, P);
    for (const auto& s : cruise) CHECK(std::abs(s.u - US) < 1e-6);

    CHECK_THROWS(surge_rollout({0, 0}, zero, std::vector<double>{}, 0.1, P));
    CHECK_THROWS(surge_rollout({0, 0}, zero, constant(1.0), 0.0, P));

    // braking hard never produces negative speed
    const auto brake = surge_rollout({0.0, 0.05}, zero, constant(-15.72), 0.1, P);
    for (const auto& s : brake) CHECK(s.u >= 0.0);
}

TEST_CASE("surge rollout is monotone in the inputs") {
    const FrozenContext zero;
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> d(-15.72, 15.72), bump(0.0, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> lo(15), hi(15);
        for (std::size_t k = 0; k < 15; ++k) {
            lo[k] = d(rng);
            hi[k] = std::min(15.72, lo[k] + bump(rng));
        }
        const auto a = surge_rollout({0, 0.1}, zero, lo, 0.1, P);
        const auto b = surge_rollout({0, 0.1}, zero, hi, 0.1, P);
        for (std::size_t k = 0; k < a.size(); ++k) CHECK(b[k].u >= a[k].u);
    }
}

namespace {

// Worst relative mismatch of the Euler prediction against the RK4 plant over
// 15 steps: (speed at every step, position at the end of the horizon).
std::pair<double, double> prediction_mismatch(double t_lo, double t_hi, double u_lo, double u_hi) {
    const Plant plant(P);
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> d(t_lo, t_hi), speed(u_lo, u_hi);
    double wu = 0.0, wx = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> in(15);
        for (auto& t : in) t = d(rng);
        VehicleState s;
        s.nu[0] = speed(rng);
        const auto pred = surge_rollout({0.0, s.u()}, FrozenContext{}, in, 0.1, P);
        double peak = s.u();
        for (std::size_t k = 0; k < in.size(); ++k) {
            GeneralizedForce tau = GeneralizedForce::Zero();
            tau[0] = in[k];
            tau[2] = P.B - P.W;
            s = plant.step(s, tau, 0.1);
            peak = std::max(peak, std::abs(s.u()));
            wu = std::max(wu, std::abs(pred[k + 1].u - s.u()) / peak);
        }
        wx = std::max(wx, std::abs(pred.back().x - s.x()) / std::abs(s.x()));
    }
    return {wu, wx};
}

}  // namespace

TEST_CASE("surge rollout agrees with the 6-DOF plant") {
    // near cruise the Euler prediction tracks the plant within 1%
    const auto [u_cruise, x_cruise] = prediction_mismatch(0.5, 1.5, 0.12, 0.16);
    CHECK(u_cruise <= 0.01);
    CHECK(x_cruise <= 0.01);
    // hard acceleration over the full input range: first-order error of the
    // forward-Euler prediction at dt = 0.1 shows, but stays bounded
    const auto [u_full, x_full] = prediction_mismatch(0.0, 15.72, 0.1, 0.5);
    CHECK(u_full <= 0.05);
    CHECK(x_full <= 0.05);
}

// ---------------------------------------------------------------------------
// costs

TEST_CASE("tracking cost examples") {
    MpcConfig cfg;
    const SurgeModel m(P, FrozenContext{});
    CHECK(tmpc_cost(US, {0, US}, m, constant(P.X_uu * US * US), cfg) < 1e-12);
    const double rest = tmpc_cost(US, {0, 0}, m, constant(0.0), cfg);
    CHECK(rest == doctest::Approx(15 * US * US).epsilon(1e-12));
    CHECK(rest == doctest::Approx(0.2886).epsilon(1e-3));
}

TEST_CASE("stage cost examples") {
    MpcConfig cfg;
    const double hover = heave_hover_power(P);
    CHECK(stage_cost(constant(0.0), cfg, P) == doctest::Approx(15 * hover * 0.1).epsilon(1e-12));
    CHECK(stage_cost(constant(0.0), cfg, P) == doctest::Approx(0.942).epsilon(1e-3));
    const double per_step = 2 * thruster_power(0.9268 / 2, P) + hover;
    CHECK(stage_cost(constant(0.9268), cfg, P) == doctest::Approx(15 * 0.1 * per_step).epsilon(1e-12));
    CHECK(stage_cost(constant(0.9268), cfg, P) == doctest::Approx(1.414).epsilon(1e-3));
}

TEST_CASE("terminal cost") {
    MpcConfig cfg;
    cfg.destination = 10.0;
    CHECK(terminal_cost({10.0, US}, cfg, P) == 0.0);
    CHECK(terminal_cost({11.0, US}, cfg, P) == 0.0);
    CHECK(terminal_cost({5.0, US}, cfg, P) == doctest::Approx(34.0).epsilon(1e-3));

    // identity with distance times energy per distance on the clamp-free domain
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> x(0.0, 10.0), u(cfg.speed_floor, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const SurgeState s{x(rng), u(rng)};
        const double id = (cfg.destination - s.x) * epd(s.u, P);
        CHECK(std::abs(terminal_cost(s, cfg, P) - id) <= 1e-12 * std::max(1.0, id));
    }
    // strictly increasing in remaining distance
    for (double xn = 0.0; xn < 9.9; xn += 0.1)
        CHECK(terminal_cost({xn, 0.2}, cfg, P) > terminal_cost({xn + 0.1, 0.2}, cfg, P));
    // finite at rest
    CHECK(std::isfinite(terminal_cost({0.0, 0.0}, cfg, P)));
}

TEST_CASE("energy-optimal cost examples") {
    MpcConfig cfg;
    const SurgeModel m(P, FrozenContext{});
    const double hover = heave_hover_power(P);

    cfg.destination = 0.0;
    CHECK(eompc_cost({0, 0}, m, constant(0.0), cfg, P) == doctest::Approx(15 * hover * 0.1).epsilon(1e-12));

    cfg.destination = 10.0;
    const double from_rest = eompc_cost({0, 0}, m, constant(0.0), cfg, P);
    CHECK(from_rest > 1000.0);  // terminal at the speed floor dominates

    cfg.destination = 5.0;
    const double cruise = P.X_uu * US * US;
    const double advance = 15 * 0.1 * US;
    const double expected = 15 * 0.1 * (2 * thruster_power(cruise / 2, P) + hover) + (5.0 - advance) * epd(US, P);
    const double got = eompc_cost({0, US}, m, constant(cruise), cfg, P);
    CHECK(got == doctest::Approx(expected).epsilon(1e-9));
    CHECK(got == doctest::Approx(1.414 + 32.56).epsilon(2e-3));
}

TEST_CASE("adjoint gradient matches finite differences") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> thrust(-14.0, 14.0), speed(0.02, 0.6), pos(0.0, 8.0);
    for (auto kind : {CostKind::energy_optimal, CostKind::tracking}) {
        MpcConfig cfg;
        HorizonCost cost(kind, P, cfg, US);
        int checked = 0;
        while (checked < 100) {
            cost.reset({pos(rng), speed(rng)}, FrozenContext{});
            std::vector<double> T(15), g(15);
            for (auto& t : T) t = thrust(rng);
            const auto traj = surge_rollout(cost.initial(), cost.model(), T, cfg.dt);
            // stay away from the kinks (speed clamp, speed floor, destination)
            const bool smooth =
                std::all_of(traj.begin() + 1, traj.end(), [](const SurgeState& s) { return s.u > 0.01; }) &&
                std::abs(traj.back().x - cfg.destination) > 0.05;
            if (!smooth) continue;
            ++checked;
            cost(T, g);
            for (std::size_t i = 0; i < T.size(); ++i) {
                const double h = 1e-6 * std::max(1.0, std::abs(T[i]));
                auto tp = T, tm = T;
                tp[i] += h;
                tm[i] -= h;
                const double fd = (cost(tp, {}) - cost(tm, {})) / (2 * h);
                CHECK(std::abs(fd - g[i]) <= 1e-5 * std::max(std::abs(fd), 1e-3));
            }
        }
    }
}

// ---------------------------------------------------------------------------
// horizon solver

TEST_CASE("tracking solve from the setpoint") {
    MpcConfig cfg;
    HorizonCost cost(CostKind::tracking, P, cfg, US);
    cost.reset({0, US}, FrozenContext{});
    const auto sol = solve_horizon(cost, cfg, {});
    CHECK(sol.cost <= 1e-6);
    for (double t : sol.inputs) CHECK(t == doctest::Approx(P.X_uu * US * US).epsilon(1e-3));
}

TEST_CASE("energy-optimal solve from rest accelerates") {
    // Power grows like |T|^1.5, so the optimum accelerates moderately rather
    // than at the bound; the trajectory optimum from rest opens near 2 N too.
    MpcConfig cfg;
    HorizonCost cost(CostKind::energy_optimal, P, cfg, US);
    cost.reset({0, 0}, FrozenContext{});
    const auto sol = solve_horizon(cost, cfg, {});
    const double cruise = P.X_uu * US * US;
    CHECK(sol.inputs.front() > 2.0 * cruise);
    CHECK(sol.inputs.front() < 0.5 * cfg.thrust_max);
    // same answer when started from full thrust
    const auto from_max = solve_horizon(cost, cfg, constant(cfg.thrust_max));
    CHECK(from_max.cost == doctest::Approx(sol.cost).epsilon(1e-6));
    CHECK(from_max.inputs.front() == doctest::Approx(sol.inputs.front()).epsilon(1e-3));
}

TEST_CASE("horizon solution dominates the baselines and random sequences") {
    MpcConfig cfg;
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> T(cfg.thrust_min, cfg.thrust_max);
    const std::vector<SurgeState> starts{{0, 0}, {3, US}, {8.5, 0.2}, {9.9, 0.05}, {2, 0.45}};
    for (auto kind : {CostKind::energy_optimal, CostKind::tracking}) {
        HorizonCost cost(kind, P, cfg, US);
        for (const auto& s0 : starts) {
            cost.reset(s0, FrozenContext{});
            std::vector<double> warm(15);
            for (auto& t : warm) t = T(rng);
            const auto sol = solve_horizon(cost, cfg, warm);
            for (double t : sol.inputs) {
                CHECK(t >= cfg.thrust_min);
                CHECK(t <= cfg.thrust_max);
            }
            const double cruise = std::clamp(P.X_uu * US * US, cfg.thrust_min, cfg.thrust_max);
            CHECK(sol.cost <= cost(constant(0.0), {}));
            CHECK(sol.cost <= cost(constant(cruise), {}));
            CHECK(sol.cost <= cost(warm, {}));

            // deterministic
            const auto again = solve_horizon(cost, cfg, warm);
            CHECK(again.inputs == sol.inputs);

            int beaten = 0;
            std::vector<double> r(15);
            for (int i = 0; i < 10000 / static_cast<int>(starts.size()); ++i) {
                for (auto& t : r) t = T(rng);
                if (cost(r, {}) < sol.cost) ++beaten;
            }
            CHECK(beaten == 0);
        }
    }
}

// ---------------------------------------------------------------------------
// switching

TEST_CASE("switch defaults") {
    const SwitchConfig sw = SwitchConfig::defaults(P, 10.0);
    CHECK(sw.u_low == doctest::Approx(0.95 * US));
    CHECK(sw.u_high == doctest::Approx(1.05 * US));
    // coast u(t) = u* / (1 + k u* t) reaches u*/4 at t = 3 / (k u*)
    const double k = P.X_uu / (P.m - P.X_du);
    const double margin = 1.5 * US * 3.0 / (k * US);
    CHECK(sw.x_switch == doctest::Approx(10.0 - margin));
    CHECK(SwitchConfig::default_margin(P) == doctest::Approx(margin));
    CHECK_THROWS(SwitchConfig{0.2, 0.1, 8.0}.validate(US, 10.0));
}

TEST_CASE("switching rule") {
    SwitchConfig sw{0.95 * US, 1.05 * US, 8.0};
    RteoHistory h;

    SUBCASE("missing history solves") { CHECK(rteo_should_solve(0.0, 0.0, h, US, sw)); }
    SUBCASE("past the switch position always solves") {
        h = {0.0, US, 1.0, 1.0};
        CHECK(rteo_should_solve(8.0, US, h, US, sw));
    }
    SUBCASE("starting slow") {
        h = {0.0, US, 1.0, 1.0};
        CHECK(rteo_should_solve(1.0, 0.5 * US, h, US, sw));        // below the band
        CHECK(rteo_should_solve(1.0, US, {0.0, 0.99 * US, 1.0, 1.0}, US, sw));  // still accelerating
        CHECK_FALSE(rteo_should_solve(1.0, US, h, US, sw));        // cruising: hold
        CHECK_FALSE(rteo_should_solve(1.0, 0.97 * US, h, US, sw)); // decelerating inside the band
    }
    SUBCASE("starting fast") {
        h = {0.4, US, 1.0, 1.0};
        CHECK(rteo_should_solve(1.0, 2 * US, h, US, sw));          // above the band
        CHECK(rteo_should_solve(1.0, US, {0.4, US, 0.9, 0.8}, US, sw));  // thrust still rising
        CHECK_FALSE(rteo_should_solve(1.0, US, h, US, sw));
        CHECK(rteo_should_solve(1.0, US, {0.4, US, 1.0, std::nullopt}, US, sw));
    }
}

TEST_CASE("RTEO controller holds the previous thrust while cruising") {
    MpcConfig cfg;
    RteoController c(P, cfg, SwitchConfig::defaults(P, 10.0));
    VehicleState s;
    const auto first = c.decide(s);
    CHECK(first.solver_invoked);
    s.eta[0] = 2.0;
    s.nu[0] = US;
    const auto second = c.decide(s);  // still speeding up relative to the first step
    CHECK(second.solver_invoked);
    const auto third = c.decide(s);   // u no longer rising: hold
    CHECK_FALSE(third.solver_invoked);
    CHECK(third.thrust == second.thrust);
    CHECK(c.history().thrust_prev.value() == second.thrust);
}

TEST_CASE("config validation") {
    MpcConfig cfg;
    cfg.horizon = 0;
    CHECK_THROWS(cfg.validate());
    cfg = {};
    cfg.thrust_min = 1.0;
    cfg.thrust_max = -1.0;
    CHECK_THROWS(cfg.validate());
}
