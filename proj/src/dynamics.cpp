#include "auvmpc/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace auvmpc {

double wrap_angle(double a) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double w = std::remainder(a, two_pi);  // [-pi, pi]
    if (w <= -std::numbers::pi) w += two_pi;
    return w;
}

GeneralizedForce thruster_allocation(const ThrusterForces& T, const VehicleParams& p) {
    GeneralizedForce tau;
    tau << T.T1 + T.T2, 0.0, T.T3 + T.T4, 0.0, p.l_1 * (T.T3 - T.T4), p.l_2 * (T.T1 - T.T2);
    return tau;
}

double thruster_power(double thrust, const VehicleParams& p) {
    const double a = std::abs(thrust);
    return p.power_ratio() * a * std::sqrt(a);
}

Matrix6 mass_matrix(const VehicleParams& p) {
    Matrix6 M = Matrix6::Zero();
    const double mz = p.m * p.z_g;
    M.diagonal() << p.m - p.X_du, p.m - p.Y_dv, p.m - p.Z_dw, p.I_xx - p.K_dp, p.I_yy - p.M_dq,
        p.I_zz - p.N_dr;
    // -m S(r_g) and m S(r_g) blocks for r_g = (0, 0, z_g)
    M(0, 4) = M(4, 0) = mz;
    M(1, 3) = M(3, 1) = -mz;
    return M;
}

Vector6 damping_force(const Vector6& nu, const VehicleParams& p) {
    Vector6 d;
    d << p.X_uu, p.Y_vv, p.Z_ww, p.K_pp, p.M_qq, p.N_rr;
    return -(d.array() * nu.array().abs() * nu.array()).matrix();
}

Vector6 coriolis_force(const Vector6& nu, const VehicleParams& p) {
    const Matrix6 M = mass_matrix(p);
    const Vector6 a = M * nu;
    const Eigen::Vector3d nu1 = nu.head<3>();
    const Eigen::Vector3d nu2 = nu.tail<3>();
    const Eigen::Vector3d a1 = a.head<3>();
    const Eigen::Vector3d a2 = a.tail<3>();
    Vector6 c;
    c.head<3>() = nu2.cross(a1);
    c.tail<3>() = nu1.cross(a1) + nu2.cross(a2);
    return c;
}

Vector6 restoring_force(const Vector6& eta, const VehicleParams& p) {
    const double sphi = std::sin(eta[3]), cphi = std::cos(eta[3]);
    const double sth = std::sin(eta[4]), cth = std::cos(eta[4]);
    const double wb = p.W - p.B;
    const double zw = p.z_g * p.W;
    Vector6 g;
    g << wb * sth, -wb * cth * sphi, -wb * cth * cphi, zw * cth * sphi, zw * sth, 0.0;
    return g;
}

Eigen::Matrix3d rotation_matrix(double phi, double theta, double psi) {
    return (Eigen::AngleAxisd(psi, Eigen::Vector3d::UnitZ()) *
            Eigen::AngleAxisd(theta, Eigen::Vector3d::UnitY()) *
            Eigen::AngleAxisd(phi, Eigen::Vector3d::UnitX()))
        .toRotationMatrix();
}

Matrix6 kinematic_transform(const Vector6& eta) {
    const double phi = eta[3], theta = eta[4];
    const double cth = std::cos(theta);
    if (std::abs(theta) >= std::numbers::pi / 2.0 - kPitchSingularityTol)
        throw SingularTransformError("kinematic transform singular at pitch " + std::to_string(theta));
    const double sphi = std::sin(phi), cphi = std::cos(phi), tth = std::tan(theta);
    Matrix6 J = Matrix6::Zero();
    J.topLeftCorner<3, 3>() = rotation_matrix(phi, theta, eta[5]);
    J.bottomRightCorner<3, 3>() << 1.0, sphi * tth, cphi * tth,  //
        0.0, cphi, -sphi,                                        //
        0.0, sphi / cth, cphi / cth;
    return J;
}

Plant::Plant(VehicleParams params)
    : params_(params), mass_inverse_(mass_matrix(params).inverse()) {}

StateDerivative Plant::derivative(const VehicleState& s, const GeneralizedForce& tau) const {
    const Vector6 rhs = tau - coriolis_force(s.nu, params_) + damping_force(s.nu, params_) -
                        restoring_force(s.eta, params_);
    return {mass_inverse_ * rhs, kinematic_transform(s.eta) * s.nu};
}

VehicleState Plant::step(const VehicleState& s, const GeneralizedForce& tau, double dt) const {
    if (!(dt > 0.0)) throw std::invalid_argument("integrate_step: dt must be positive");
    auto shifted = [](const VehicleState& base, const StateDerivative& d, double h) {
        return VehicleState{base.nu + h * d.nu_dot, base.eta + h * d.eta_dot};
    };
    const StateDerivative k1 = derivative(s, tau);
    const StateDerivative k2 = derivative(shifted(s, k1, dt / 2), tau);
    const StateDerivative k3 = derivative(shifted(s, k2, dt / 2), tau);
    const StateDerivative k4 = derivative(shifted(s, k3, dt), tau);
    VehicleState out;
    out.nu = s.nu + dt / 6.0 * (k1.nu_dot + 2.0 * k2.nu_dot + 2.0 * k3.nu_dot + k4.nu_dot);
    out.eta = s.eta + dt / 6.0 * (k1.eta_dot + 2.0 * k2.eta_dot + 2.0 * k3.eta_dot + k4.eta_dot);
    for (int i = 3; i < 6; ++i) out.eta[i] = wrap_angle(out.eta[i]);
    return out;
}

StateDerivative state_derivative(const VehicleState& s, const GeneralizedForce& tau,
                                 const VehicleParams& params) {
    return Plant(params).derivative(s, tau);
}

VehicleState integrate_step(const VehicleState& s, const GeneralizedForce& tau, double dt,
                            const VehicleParams& params) {
    return Plant(params).step(s, tau, dt);
}

}  // namespace auvmpc
