#include "auvmpc/surge_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace auvmpc {

FrozenContext FrozenContext::from_state(const VehicleState& s) {
    return {s.nu[1], s.nu[2], s.nu[3], s.nu[4], s.nu[5], s.eta[3], s.eta[4], s.eta[5]};
}

SurgeModel::SurgeModel(const VehicleParams& p, const FrozenContext& c)
    : mass_(p.surge_mass()),
      drag_(p.X_uu),
      bias_(p.m * (c.w * c.q - c.v * c.r + p.z_g * c.p * c.r) + (p.W - p.B) * std::sin(c.theta)) {
    const double sphi = std::sin(c.phi), cphi = std::cos(c.phi);
    const double sth = std::sin(c.theta), cth = std::cos(c.theta);
    const double spsi = std::sin(c.psi), cpsi = std::cos(c.psi);
    kin_u_ = cpsi * cth;
    kin_0_ = (cpsi * sth * sphi - spsi * cphi) * c.v + (spsi * sphi + cpsi * sth * cphi) * c.w;
}

SurgeDerivative SurgeModel::derivative(const SurgeState& s, double thrust) const {
    return {kin_u_ * s.u + kin_0_, (thrust - drag_ * std::abs(s.u) * s.u - bias_) / mass_};
}

SurgeState SurgeModel::step(const SurgeState& s, double thrust, double dt) const {
    const SurgeDerivative d = derivative(s, thrust);
    return {s.x + dt * d.x_dot, std::max(0.0, s.u + dt * d.u_dot)};
}

SurgeDerivative surge_derivative(const SurgeState& s, const FrozenContext& ctx, double thrust,
                                 const VehicleParams& params) {
    return SurgeModel(params, ctx).derivative(s, thrust);
}

std::vector<SurgeState> surge_rollout(const SurgeState& s0, const SurgeModel& model,
                                      std::span<const double> inputs, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("surge_rollout: dt must be positive");
    if (inputs.empty()) throw std::invalid_argument("surge_rollout: horizon must be at least 1");
    std::vector<SurgeState> out;
    out.reserve(inputs.size() + 1);
    out.push_back(s0);
    for (double T : inputs) out.push_back(model.step(out.back(), T, dt));
    return out;
}

std::vector<SurgeState> surge_rollout(const SurgeState& s0, const FrozenContext& ctx,
                                      std::span<const double> inputs, double dt,
                                      const VehicleParams& params) {
    return surge_rollout(s0, SurgeModel(params, ctx), inputs, dt);
}

}  // namespace auvmpc
