#pragma once

#include "auvmpc/vehicle.hpp"

#include <optional>

namespace auvmpc {

struct PidGains {
    double kp = 0.0;
    double ki = 0.0;
    double kd = 0.0;
    double output_limit = 0.0;    // symmetric saturation of the total output
    double integral_limit = 0.0;  // clamp on ki * integral
    double feedforward = 0.0;     // constant bias added before saturation

    void validate() const;
};

/// PID with derivative on measurement and a clamped integrator.
class Pid {
public:
    explicit Pid(PidGains gains) : gains_(gains) { gains_.validate(); }

    /// `measurement` is the controlled variable, error = setpoint - measurement.
    double step(double setpoint, double measurement, double dt);
    void reset();

    const PidGains& gains() const { return gains_; }
    double integral_term() const { return integral_; }

private:
    PidGains gains_;
    double integral_ = 0.0;  // already multiplied by ki
    std::optional<double> last_measurement_;
};

/// Heave, pitch and yaw loops.
struct AutopilotGains {
    PidGains depth;
    PidGains pitch;
    PidGains yaw;

    /// Loops tuned on the linearized heave/pitch/yaw dynamics of the given vehicle.
    static AutopilotGains tuned(const VehicleParams& params);
};

struct MixResult {
    ThrusterForces thrusters;
    bool saturated = false;
};

/// Inverts the thruster allocation for (T_total, tau_Z, tau_M, tau_N) demands.
/// Per-thruster saturation keeps the common-mode demand (surge, heave) first
/// and scales back the differential demand (yaw, pitch) to fit.
MixResult mix(double thrust_total, double tau_M, double tau_N, double tau_Z, const VehicleParams& params);

}  // namespace auvmpc
