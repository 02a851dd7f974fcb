#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <filesystem>
#include <map>
#include <numbers>
#include <string>

namespace auvmpc {

using Vector6 = Eigen::Matrix<double, 6, 1>;
using Matrix6 = Eigen::Matrix<double, 6, 6>;

/// Physical constants of the sphere vehicle.
///
/// Added-mass coefficients carry the hydrodynamic sign convention (negative),
/// quadratic drag coefficients are stored as positive magnitudes. Frames are
/// NED: body z points down, so positive buoyancy pushes toward negative z.
struct VehicleParams {
    double W = 200.116;   // weight [N]
    double B = 201.586;   // buoyancy [N]
    double m = 20.42;     // rigid mass [kg]
    double I_xx = 0.1205; // [kg m^2]
    double I_yy = 0.9431;
    double I_zz = 1.0061;
    double z_g = 0.0018;  // CG below body origin [m]
    double l_1 = 0.1694;  // vertical thruster arm [m]
    double l_2 = 0.2794;  // horizontal thruster arm [m]
    double R = 0.025;     // thruster radius [m]

    double X_du = -2.042;
    double Y_dv = -32.2013;
    double Z_dw = -32.2013;
    double K_dp = -0.0805;
    double M_dq = -2.6834;
    double N_dr = -2.6834;

    double X_uu = 48.17;
    double Y_vv = 4.11;
    double Z_ww = 4.11;
    double K_pp = 48.17;
    double M_qq = 4.11;
    double N_rr = 4.11;

    double rho = 1025.0;  // seawater density [kg/m^3]

    /// Per-thruster force bound [N].
    double thrust_max = 7.84;

    /// Thruster power conversion ratio C_p [W/N^1.5].
    [[nodiscard]] double power_ratio() const {
        return std::sqrt(1.0 / (2.0 * std::numbers::pi * rho)) / R;
    }

    [[nodiscard]] double surge_mass() const { return m - X_du; }
    [[nodiscard]] double net_buoyancy() const { return B - W; }

    /// Throws std::invalid_argument when a physical invariant is violated.
    void validate() const;

    /// Assigns a field by its symbol name (e.g. "X_uu"); throws on unknown keys.
    void set(const std::string& key, double value);

    [[nodiscard]] std::map<std::string, double> as_map() const;
};

/// Reads "key = value" lines ('#' comments allowed) over the compiled-in defaults.
VehicleParams load_vehicle_params(const std::filesystem::path& path);

/// Body velocities nu = (u, v, w, p, q, r) and earth-fixed pose eta = (x, y, z, phi, theta, psi).
struct VehicleState {
    Vector6 nu = Vector6::Zero();
    Vector6 eta = Vector6::Zero();

    double u() const { return nu[0]; }
    double x() const { return eta[0]; }
};

struct ThrusterForces {
    double T1 = 0.0;  // horizontal, starboard
    double T2 = 0.0;  // horizontal, port
    double T3 = 0.0;  // vertical, fore
    double T4 = 0.0;  // vertical, aft

    ThrusterForces operator+(const ThrusterForces& o) const {
        return {T1 + o.T1, T2 + o.T2, T3 + o.T3, T4 + o.T4};
    }
    ThrusterForces operator*(double s) const { return {T1 * s, T2 * s, T3 * s, T4 * s}; }
};

/// Generalized control force (X, Y, Z, K, M, N) in the body frame.
using GeneralizedForce = Vector6;

}  // namespace auvmpc
