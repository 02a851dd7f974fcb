#pragma once

#include "auvmpc/vehicle.hpp"

#include <stdexcept>

namespace auvmpc {

/// Raised when the Euler-angle kinematic transform approaches its pitch singularity.
class SingularTransformError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

inline constexpr double kPitchSingularityTol = 1e-6;

/// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

/// tau = (T1+T2, 0, T3+T4, 0, l_1(T3-T4), l_2(T1-T2)).
GeneralizedForce thruster_allocation(const ThrusterForces& T, const VehicleParams& params);

/// Momentum-theory power C_p |T|^1.5; reverse thrust costs the same as forward.
double thruster_power(double thrust, const VehicleParams& params);

/// Total mass matrix: rigid body about the body origin plus diagonal added mass.
Matrix6 mass_matrix(const VehicleParams& params);

/// Quadratic drag written as the force the water exerts, -d_i |nu_i| nu_i.
Vector6 damping_force(const Vector6& nu, const VehicleParams& params);

/// Coriolis-centripetal vector C(nu) nu for the total mass matrix, skew form.
Vector6 coriolis_force(const Vector6& nu, const VehicleParams& params);

/// Restoring vector g(eta) (appears on the left-hand side of the equations of motion).
Vector6 restoring_force(const Vector6& eta, const VehicleParams& params);

/// ZYX Euler rotation body -> earth.
Eigen::Matrix3d rotation_matrix(double phi, double theta, double psi);

/// Full 6x6 kinematic transform J(eta); throws SingularTransformError near |theta| = pi/2.
Matrix6 kinematic_transform(const Vector6& eta);

struct StateDerivative {
    Vector6 nu_dot;
    Vector6 eta_dot;
};

/// Precomputes the factorized mass matrix so repeated derivative evaluations
/// do not refactor it.
class Plant {
public:
    explicit Plant(VehicleParams params);

    const VehicleParams& params() const { return params_; }

    StateDerivative derivative(const VehicleState& s, const GeneralizedForce& tau) const;

    /// Classical RK4 step with the control force held over dt; angles re-wrapped.
    VehicleState step(const VehicleState& s, const GeneralizedForce& tau, double dt) const;

private:
    VehicleParams params_;
    Matrix6 mass_inverse_;
};

StateDerivative state_derivative(const VehicleState& s, const GeneralizedForce& tau,
                                 const VehicleParams& params);

VehicleState integrate_step(const VehicleState& s, const GeneralizedForce& tau, double dt,
                            const VehicleParams& params);

}  // namespace auvmpc
