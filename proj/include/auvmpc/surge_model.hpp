#pragma once

#include "auvmpc/vehicle.hpp"

#include <span>
#include <vector>

namespace auvmpc {

struct SurgeState {
    double x = 0.0;  // [m]
    double u = 0.0;  // [m/s]
};

/// Non-surge velocities and attitude, held constant over a prediction horizon.
struct FrozenContext {
    double v = 0.0, w = 0.0, p = 0.0, q = 0.0, r = 0.0;
    double phi = 0.0, theta = 0.0, psi = 0.0;

    static FrozenContext from_state(const VehicleState& s);
};

struct SurgeDerivative {
    double x_dot;
    double u_dot;
};

/// Decoupled surge dynamics with the context folded into constant coefficients:
///   u_dot = (T - X_uu |u| u - bias) / mass,   x_dot = kin_u * u + kin_0.
class SurgeModel {
public:
    SurgeModel(const VehicleParams& params, const FrozenContext& ctx);

    SurgeDerivative derivative(const SurgeState& s, double thrust) const;

    /// One forward-Euler step with u clamped at zero from below.
    SurgeState step(const SurgeState& s, double thrust, double dt) const;

    double mass() const { return mass_; }
    double drag() const { return drag_; }
    double bias() const { return bias_; }
    double kin_u() const { return kin_u_; }
    double kin_0() const { return kin_0_; }

private:
    double mass_;
    double drag_;
    double bias_;
    double kin_u_;
    double kin_0_;
};

SurgeDerivative surge_derivative(const SurgeState& s, const FrozenContext& ctx, double thrust,
                                 const VehicleParams& params);

/// Returns inputs.size() + 1 states, the first being s0.
std::vector<SurgeState> surge_rollout(const SurgeState& s0, const FrozenContext& ctx,
                                      std::span<const double> inputs, double dt,
                                      const VehicleParams& params);

std::vector<SurgeState> surge_rollout(const SurgeState& s0, const SurgeModel& model,
                                      std::span<const double> inputs, double dt);

}  // namespace auvmpc
