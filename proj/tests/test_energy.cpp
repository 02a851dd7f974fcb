#include "doctest.h"

#include "auvmpc/dynamics.hpp"
#include "auvmpc/energy.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace auvmpc;

namespace {

double cp() { return std::sqrt(1.0 / (2.0 * std::acos(-1.0) * 1025.0)) / 0.025; }

// Grid search over u for the minimum of (P_hover + a u^3) / u, a = sqrt(2)/2 Cp X_uu^1.5.
double grid_optimum(double step) {
    const VehicleParams p;
    const double hover = 2.0 * cp() * std::pow((p.B - p.W) / 2.0, 1.5);
    const double a = std::sqrt(2.0) / 2.0 * cp() * std::pow(p.X_uu, 1.5);
    double best_u = step, best = INFINITY;
    for (double u = step; u < 1.0; u += step) {
        const double e = (hover + a * u * u * u) / u;
        if (e < best) {
            best = e;
            best_u = u;
        }
    }
    return best_u;
}

}  // namespace

TEST_CASE("trip energy examples") {
    const VehicleParams p;
    std::vector<ThrusterForces> zeros(50);
    CHECK(trip_energy(zeros, 0.1, p).total == 0.0);

    std::vector<ThrusterForces> ones(100, ThrusterForces{1, 1, 1, 1});
    const EnergyLedger e = trip_energy(ones, 0.1, p);
    CHECK(e.total == doctest::Approx(4.0 * cp() * 10.0).epsilon(1e-12));
    CHECK(e.total == doctest::Approx(19.94).epsilon(1e-3));
    CHECK(e.travel_time == doctest::Approx(10.0));
    // symmetric pairs: all energy is surge and heave
    CHECK(e.surge == doctest::Approx(e.total / 2));
    CHECK(e.heave == doctest::Approx(e.total / 2));
    CHECK(e.yaw == 0.0);
    CHECK(e.pitch == 0.0);
}

TEST_CASE("energy split sums to the actual thruster power") {
    const VehicleParams p;
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> d(-7.84, 7.84);
    std::vector<ThrusterForces> in(300);
    double direct = 0.0;
    for (auto& t : in) {
        t = {d(rng), d(rng), d(rng), d(rng)};
        direct += 0.1 * (thruster_power(t.T1, p) + thruster_power(t.T2, p) + thruster_power(t.T3, p) +
                         thruster_power(t.T4, p));
    }
    const EnergyLedger e = trip_energy(in, 0.1, p);
    CHECK(e.total == doctest::Approx(direct).epsilon(1e-12));
    CHECK(e.surge + e.heave + e.pitch + e.yaw == doctest::Approx(e.total).epsilon(1e-12));

    // pure differential pair goes to yaw
    const std::vector<ThrusterForces> turn{{1, -1, 0, 0}};
    CHECK(trip_energy(turn, 1.0, p).yaw == doctest::Approx(2 * cp()));
}

TEST_CASE("trip energy is additive") {
    const VehicleParams p;
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> d(-7.84, 7.84);
    std::vector<ThrusterForces> all(40);
    for (auto& t : all) t = {d(rng), d(rng), d(rng), d(rng)};
    const std::span<const ThrusterForces> whole(all);
    const EnergyLedger a = trip_energy(whole.first(17), 0.1, p);
    const EnergyLedger b = trip_energy(whole.subspan(17), 0.1, p);
    const EnergyLedger c = trip_energy(whole, 0.1, p);
    CHECK(a.total + b.total == doctest::Approx(c.total).epsilon(1e-12));
    CHECK(a.yaw + b.yaw == doctest::Approx(c.yaw).epsilon(1e-12));
}

TEST_CASE("hover power") {
    const VehicleParams p;
    CHECK(heave_hover_power(p) == doctest::Approx(0.628).epsilon(1e-2));
    CHECK(heave_hover_power(p) == doctest::Approx(2.0 * thruster_power((p.B - p.W) / 2.0, p)).epsilon(1e-14));
    VehicleParams neutral = p;
    neutral.B = neutral.W;
    CHECK(heave_hover_power(neutral) == 0.0);
}

TEST_CASE("energy per distance") {
    const VehicleParams p;
    CHECK(epd(0.1387, p) == doctest::Approx(6.80).epsilon(2e-3));
    CHECK_THROWS(epd(0.0, p));
    const double u = 0.3;
    const double quad = cruise_power_coefficient(p) * u * u;
    CHECK(epd(2 * u, p) > 4 * quad);

    // convexity on a grid
    for (double v = 0.02; v < 1.0; v += 0.01) {
        const double h = 1e-3;
        CHECK(epd(v + h, p) - 2 * epd(v, p) + epd(v - h, p) > 0.0);
    }
}

TEST_CASE("static optimal velocity") {
    const VehicleParams p;
    const double us = static_optimal_velocity(p);
    CHECK(us == doctest::Approx(0.1387).epsilon(1e-3));
    CHECK(std::abs(us - grid_optimum(1e-5)) <= 1e-4);

    // stationary point of epd
    const double h = 1e-6;
    CHECK(std::abs(epd(us + h, p) - epd(us - h, p)) / (2 * h) < 1e-6);

    VehicleParams draggy = p;
    draggy.X_uu *= 2;
    CHECK(static_optimal_velocity(draggy) / us == doctest::Approx(std::pow(2.0, -0.5)).epsilon(1e-9));
}

TEST_CASE("static trip cost") {
    const VehicleParams p;
    const double us = static_optimal_velocity(p);
    CHECK(static_trip_cost(0.0, p) == 0.0);
    CHECK(static_trip_cost(10.0, p) == doctest::Approx(10 * epd(us, p)).epsilon(1e-14));
    CHECK(static_trip_cost(10.0, p) == doctest::Approx(68.0).epsilon(1e-3));
    CHECK(static_trip_cost(10.0, 0.5, p) > static_trip_cost(10.0, p));
}

TEST_CASE("ledger csv") {
    CHECK(EnergyLedger::csv_header() == "surge_J,heave_J,pitch_J,yaw_J,total_J,t_travel_s");
    EnergyLedger e;
    e.add({1, 1, 0, 0}, 1.0, VehicleParams{});
    const std::string row = e.csv_row();
    CHECK(std::count(row.begin(), row.end(), ',') == 5);
}
