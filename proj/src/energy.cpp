#include "auvmpc/energy.hpp"

#include "auvmpc/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace auvmpc {

namespace {

struct PairSplit {
    double common;
    double differential;
};

PairSplit split_pair(double a, double b, const VehicleParams& p) {
    const double actual = thruster_power(a, p) + thruster_power(b, p);
    const double common = 2.0 * thruster_power(0.5 * (a + b), p);
    const double diff = 2.0 * thruster_power(0.5 * (a - b), p);
    const double sum = common + diff;
    if (sum <= 0.0) return {0.0, 0.0};
    const double diff_share = actual * (diff / sum);
    return {actual - diff_share, diff_share};
}

}  // namespace

void EnergyLedger::add(const ThrusterForces& T, double dt, const VehicleParams& p) {
    const PairSplit h = split_pair(T.T1, T.T2, p);
    const PairSplit v = split_pair(T.T3, T.T4, p);
    surge += h.common * dt;
    yaw += h.differential * dt;
    heave += v.common * dt;
    pitch += v.differential * dt;
    total += (thruster_power(T.T1, p) + thruster_power(T.T2, p) + thruster_power(T.T3, p) +
              thruster_power(T.T4, p)) *
             dt;
}

std::string EnergyLedger::csv_header() { return "surge_J,heave_J,pitch_J,yaw_J,total_J,t_travel_s"; }

std::string EnergyLedger::csv_row() const {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,%.9g,%.9g,%.9g", surge, heave, pitch, yaw,
                  total, travel_time);
    return buf;
}

EnergyLedger trip_energy(std::span<const ThrusterForces> inputs, double dt, const VehicleParams& p) {
    if (!(dt > 0.0)) throw std::invalid_argument("trip_energy: dt must be positive");
    EnergyLedger ledger;
    for (const auto& T : inputs) ledger.add(T, dt, p);
    ledger.travel_time = dt * static_cast<double>(inputs.size());
    return ledger;
}

double heave_hover_power(const VehicleParams& p) {
    const double net = p.net_buoyancy();
    if (net < 0.0) throw std::invalid_argument("heave_hover_power: requires B >= W");
    return std::numbers::sqrt2 / 2.0 * p.power_ratio() * std::pow(net, 1.5);
}

double cruise_power_coefficient(const VehicleParams& p) {
    return std::numbers::sqrt2 / 2.0 * p.power_ratio() * std::pow(p.X_uu, 1.5);
}

double epd(double u, const VehicleParams& p) {
    if (!(u > 0.0)) throw std::invalid_argument("epd: speed must be positive");
    return cruise_power_coefficient(p) * u * u + heave_hover_power(p) / u;
}

double static_optimal_velocity(const VehicleParams& p) {
    if (!(p.B > p.W)) throw std::invalid_argument("static_optimal_velocity: requires B > W");
    return std::cbrt(heave_hover_power(p) / (2.0 * cruise_power_coefficient(p)));
}

double static_trip_cost(double distance, const VehicleParams& p) {
    return static_trip_cost(distance, static_optimal_velocity(p), p);
}

double static_trip_cost(double distance, double speed, const VehicleParams& p) {
    if (distance < 0.0) throw std::invalid_argument("static_trip_cost: distance must be non-negative");
    if (distance == 0.0) return 0.0;
    return distance * epd(speed, p);
}

}  // namespace auvmpc
