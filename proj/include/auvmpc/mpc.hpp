#pragma once

#include "auvmpc/box_solver.hpp"
#include "auvmpc/surge_model.hpp"
#include "auvmpc/vehicle.hpp"

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace auvmpc {

struct MpcConfig {
    int horizon = 15;
    double dt = 0.1;
    double thrust_min = -15.72;  // bounds on T_total [N]
    double thrust_max = 15.72;
    double destination = 10.0;   // x_f [m]
    double speed_floor = 1e-3;   // terminal-cost velocity floor [m/s]
    SolverSettings solver;
    bool warm_start = true;

    void validate() const;
};

struct SwitchConfig {
    double u_low = 0.0;
    double u_high = 0.0;
    double x_switch = 0.0;

    void validate(double u_star, double destination) const;

    /// Default thresholds: +-5% around u*, and x_switch = x_f - margin where
    /// margin = 1.5 u* t_brake and t_brake is the zero-thrust coast time from
    /// u* down to u*/4 under quadratic drag.
    static SwitchConfig defaults(const VehicleParams& params, double destination);
    static double default_margin(const VehicleParams& params);
};

struct ControlDecision {
    double thrust = 0.0;  // T_total [N]
    bool solver_invoked = false;
    double predicted_cost = 0.0;  // [J] for EO variants, tracking cost for T-MPC
    double solve_time = 0.0;      // [s], wall clock around the solver call
    int iterations = 0;
    int evaluations = 0;  // cost/gradient evaluations inside the solver
    SolverStatus status = SolverStatus::converged;
};

/// Sum over the horizon of (u_ref - u_{k+1})^2.
double tmpc_cost(double u_ref, const SurgeState& s0, const SurgeModel& model,
                 std::span<const double> inputs, const MpcConfig& cfg);

/// Sum over the horizon of [2 P(T_k / 2) + P_hover] dt.
double stage_cost(std::span<const double> inputs, const MpcConfig& cfg, const VehicleParams& params);

/// Remaining-distance cost-to-go max(x_f - x_N, 0) / max(u_N, u_floor) * (P_hover + a u_N^3).
double terminal_cost(const SurgeState& sN, const MpcConfig& cfg, const VehicleParams& params);

/// stage_cost + terminal_cost at the end of the predicted rollout.
double eompc_cost(const SurgeState& s0, const SurgeModel& model, std::span<const double> inputs,
                  const MpcConfig& cfg, const VehicleParams& params);

enum class CostKind { tracking, energy_optimal };

/// Horizon cost with its adjoint gradient with respect to the inputs.
class HorizonCost {
public:
    HorizonCost(CostKind kind, const VehicleParams& params, const MpcConfig& cfg, double u_ref);

    /// Fixes the initial state and frozen context for subsequent evaluations.
    void reset(const SurgeState& s0, const FrozenContext& ctx);

    double operator()(std::span<const double> inputs, std::span<double> grad) const;

    CostKind kind() const { return kind_; }
    const SurgeModel& model() const { return model_; }
    const SurgeState& initial() const { return s0_; }
    double u_ref() const { return u_ref_; }
    /// Speed whose balance thrust seeds the constant-cruise candidate.
    double cruise_speed() const { return cruise_speed_; }

private:
    CostKind kind_;
    VehicleParams params_;
    MpcConfig cfg_;
    double u_ref_;
    double cp_;
    double hover_;
    double cruise_a_;
    double cruise_speed_;
    SurgeModel model_;
    SurgeState s0_;
    mutable std::vector<SurgeState> traj_;
    mutable std::vector<double> pre_;
};

struct HorizonSolution {
    std::vector<double> inputs;
    double cost = 0.0;
    int iterations = 0;
    int evaluations = 0;
    SolverStatus status = SolverStatus::converged;
};

/// Minimises the horizon cost within the input box, starting from the best of
/// the all-zero, warm-start and constant-cruise-thrust sequences.
HorizonSolution solve_horizon(const HorizonCost& cost, const MpcConfig& cfg,
                              std::span<const double> warm_start);

/// Common surface of the surge controllers.
class SurgeController {
public:
    virtual ~SurgeController() = default;
    virtual ControlDecision decide(const VehicleState& s) = 0;
    virtual std::string name() const = 0;
};

/// Receding-horizon controller for either the tracking or energy-optimal cost.
class HorizonController : public SurgeController {
public:
    HorizonController(CostKind kind, const VehicleParams& params, MpcConfig cfg);

    ControlDecision decide(const VehicleState& s) override;
    std::string name() const override;

    /// Advances the stored warm start by one step without solving.
    void shift_warm_start();
    const MpcConfig& config() const { return cfg_; }

private:
    MpcConfig cfg_;
    HorizonCost cost_;
    std::vector<double> warm_;
};

/// Memory the switching rule needs from previous control steps.
struct RteoHistory {
    std::optional<double> u_initial;
    std::optional<double> u_prev;
    std::optional<double> thrust_prev;
    std::optional<double> thrust_prev2;
};

/// Switching decision: true when the energy-optimal MPC must be solved this
/// step, false when the previous thrust is held.
bool rteo_should_solve(double x_t, double u_t, const RteoHistory& history, double u_star,
                       const SwitchConfig& sw);

class RteoController : public SurgeController {
public:
    RteoController(const VehicleParams& params, MpcConfig cfg, SwitchConfig sw);

    ControlDecision decide(const VehicleState& s) override;
    std::string name() const override { return "RTEO-MPC"; }

    const RteoHistory& history() const { return history_; }
    const SwitchConfig& switch_config() const { return sw_; }

private:
    HorizonController eo_;
    SwitchConfig sw_;
    double u_star_;
    RteoHistory history_;
};

}  // namespace auvmpc
