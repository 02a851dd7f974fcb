#pragma once

#include "auvmpc/energy.hpp"
#include "auvmpc/mpc.hpp"
#include "auvmpc/scenario.hpp"
#include "auvmpc/vehicle.hpp"

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

namespace auvmpc {

struct StepRecord {
    double t = 0.0;
    VehicleState state;         // measured at t, before the input is applied
    ThrusterForces thrusters;   // held over [t, t + dt)
    ControlDecision decision;
    bool mixer_saturated = false;
};

struct SimLog {
    std::string controller;
    std::vector<StepRecord> steps;
    VehicleState final_state;
    EnergyLedger ledger;
    double dt = 0.1;
    bool arrived = false;
    bool max_time_exceeded = false;
    std::string error;  // non-empty when the plant aborted

    int solver_calls = 0;
    double total_solve_time = 0.0;
    double max_solve_time = 0.0;

    /// Total solve time divided by the number of control steps.
    double average_solve_time() const;
    double solver_fraction() const;

    void write_trace_csv(const std::filesystem::path& path) const;
};

std::unique_ptr<SurgeController> make_controller(const Scenario& sc);

/// Closed loop: full-state feedback from the 6-DOF plant, depth/pitch/yaw PIDs,
/// the selected surge controller and the thruster mixer, stepped at sc.dt until
/// x >= xf - stop_tolerance or max_time.
SimLog run_scenario(const Scenario& sc);

/// Worst excursion over a log relative to the envelope |y| <= 0.01, |z| <= 0.005,
/// |phi| <= 0.2, |theta| <= 0.01, |psi| <= 0.01 and |T_total| <= thrust bound.
struct EnvelopeAudit {
    double worst_ratio = 0.0;  // max |value| / bound over all checks
    std::string worst_channel;
    double worst_time = 0.0;
    bool ok() const { return worst_ratio <= 1.0; }
};

EnvelopeAudit audit_envelope(const SimLog& log, double thrust_bound = 15.72);

}  // namespace auvmpc
