#pragma once

#include "auvmpc/vehicle.hpp"

#include <span>
#include <string>

namespace auvmpc {

/// Cumulative thruster energy split by degree of freedom.
struct EnergyLedger {
    double surge = 0.0;  // [J]
    double heave = 0.0;
    double pitch = 0.0;
    double yaw = 0.0;
    double total = 0.0;
    double travel_time = 0.0;  // [s]

    /// Accumulates one held input over dt.
    void add(const ThrusterForces& T, double dt, const VehicleParams& params);

    static std::string csv_header();
    std::string csv_row() const;
};

/// Energy of a thruster input sequence, each input held for dt.
///
/// Each pair (horizontal, vertical) is decomposed into a common-mode part
/// (surge, heave) and a differential part (yaw, pitch); the pair's actual
/// power is shared between the two in proportion to the power each part
/// would draw alone, so the components always sum to the true total.
EnergyLedger trip_energy(std::span<const ThrusterForces> inputs, double dt,
                         const VehicleParams& params);

/// Power needed to hold depth against the net buoyancy with both vertical thrusters.
double heave_hover_power(const VehicleParams& params);

/// Coefficient a of the steady-cruise surge power a u^3.
double cruise_power_coefficient(const VehicleParams& params);

/// Steady-cruise energy per metre at surge speed u [J/m].
double epd(double u, const VehicleParams& params);

/// Closed-form minimiser of epd.
double static_optimal_velocity(const VehicleParams& params);

/// distance * epd(speed); speed defaults to the static optimum.
double static_trip_cost(double distance, const VehicleParams& params);
double static_trip_cost(double distance, double speed, const VehicleParams& params);

}  // namespace auvmpc
