#pragma once

#include "auvmpc/mpc.hpp"
#include "auvmpc/pid.hpp"
#include "auvmpc/vehicle.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace auvmpc {

enum class ControllerKind { tracking, energy_optimal, real_time };

std::string to_string(ControllerKind k);
ControllerKind parse_controller_kind(const std::string& s);

struct Scenario {
    double x0 = 0.0;
    double xf = 10.0;
    double u0 = 0.0;
    ControllerKind controller = ControllerKind::real_time;
    VehicleParams vehicle;
    MpcConfig mpc;
    /// Unset fields fall back to SwitchConfig::defaults.
    std::optional<double> u_switch_low;
    std::optional<double> u_switch_high;
    std::optional<double> x_switch;
    std::optional<double> x_switch_margin;
    AutopilotGains pid = AutopilotGains::tuned(VehicleParams{});
    double dt = 0.1;
    double stop_tolerance = 0.01;
    double max_time = 400.0;
    int plant_substeps = 1;

    /// Scenario of the 10 m point-to-point trip from rest.
    static Scenario reference();

    /// MPC settings with destination and sampling time taken from the scenario.
    MpcConfig mpc_config() const;
    SwitchConfig switch_config() const;

    void validate() const;
};

/// Sections: [scenario], [vehicle], [controller], [pid]. Unknown keys are rejected.
Scenario parse_scenario(const std::string& text, const std::string& origin = "<text>");
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace auvmpc
