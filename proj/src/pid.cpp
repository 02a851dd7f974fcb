#include "auvmpc/pid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace auvmpc {

void PidGains::validate() const {
    if (kp < 0.0 || ki < 0.0 || kd < 0.0) throw std::invalid_argument("pid: gains must be non-negative");
    if (!(output_limit > 0.0)) throw std::invalid_argument("pid: output_limit must be positive");
    if (integral_limit < 0.0) throw std::invalid_argument("pid: integral_limit must be non-negative");
}

double Pid::step(double setpoint, double measurement, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("pid: dt must be positive");
    const double error = setpoint - measurement;
    const double derivative = last_measurement_ ? -(measurement - *last_measurement_) / dt : 0.0;
    last_measurement_ = measurement;

    const double raw = gains_.feedforward + gains_.kp * error + integral_ + gains_.kd * derivative;
    integral_ = std::clamp(integral_ + gains_.ki * error * dt, -gains_.integral_limit, gains_.integral_limit);
    return std::clamp(raw, -gains_.output_limit, gains_.output_limit);
}

void Pid::reset() {
    integral_ = 0.0;
    last_measurement_.reset();
}

AutopilotGains AutopilotGains::tuned(const VehicleParams& p) {
    // Second-order pole placement on each linearized axis: inertia J, stiffness k,
    // target natural frequency w and damping 1, integral at w^3 J / 10.
    auto place = [](double inertia, double stiffness, double w, double limit, double i_limit) {
        PidGains g;
        g.kp = std::max(0.0, inertia * w * w - stiffness);
        g.kd = 2.0 * inertia * w;
        g.ki = inertia * w * w * w / 10.0;
        g.output_limit = limit;
        g.integral_limit = i_limit;
        return g;
    };
    const double pair = 2.0 * p.thrust_max;
    AutopilotGains a;
    a.depth = place(p.m - p.Z_dw, 0.0, 1.5, pair, 0.2 * pair);
    a.depth.feedforward = p.net_buoyancy();  // NED: push down against positive buoyancy
    a.pitch = place(p.I_yy - p.M_dq, p.z_g * p.W, 3.0, p.l_1 * pair, 0.1 * p.l_1 * pair);
    a.yaw = place(p.I_zz - p.N_dr, 0.0, 2.0, p.l_2 * pair, 0.1 * p.l_2 * pair);
    return a;
}

namespace {

struct PairForces {
    double a;
    double b;
    bool saturated;
};

PairForces split(double common_total, double differential, double limit) {
    const double common_demand = 0.5 * common_total;
    const double common = std::clamp(common_demand, -limit, limit);
    const double room = limit - std::abs(common);
    const double diff = std::clamp(differential, -room, room);
    return {common + diff, common - diff, common != common_demand || diff != differential};
}

}  // namespace

MixResult mix(double thrust_total, double tau_M, double tau_N, double tau_Z, const VehicleParams& p) {
    const PairForces h = split(thrust_total, tau_N / (2.0 * p.l_2), p.thrust_max);
    const PairForces v = split(tau_Z, tau_M / (2.0 * p.l_1), p.thrust_max);
    return {{h.a, h.b, v.a, v.b}, h.saturated || v.saturated};
}

}  // namespace auvmpc
