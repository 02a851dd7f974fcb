#include "auvmpc/vehicle.hpp"

#include "auvmpc/kvfile.hpp"

#include <stdexcept>

namespace auvmpc {

namespace {

template <typename Fn>
void for_each_field(VehicleParams& p, Fn&& fn) {
    fn("W", p.W);
    fn("B", p.B);
    fn("m", p.m);
    fn("I_xx", p.I_xx);
    fn("I_yy", p.I_yy);
    fn("I_zz", p.I_zz);
    fn("z_g", p.z_g);
    fn("l_1", p.l_1);
    fn("l_2", p.l_2);
    fn("R", p.R);
    fn("X_du", p.X_du);
    fn("Y_dv", p.Y_dv);
    fn("Z_dw", p.Z_dw);
    fn("K_dp", p.K_dp);
    fn("M_dq", p.M_dq);
    fn("N_dr", p.N_dr);
    fn("X_uu", p.X_uu);
    fn("Y_vv", p.Y_vv);
    fn("Z_ww", p.Z_ww);
    fn("K_pp", p.K_pp);
    fn("M_qq", p.M_qq);
    fn("N_rr", p.N_rr);
    fn("rho", p.rho);
    fn("thrust_max", p.thrust_max);
}

}  // namespace

void VehicleParams::validate() const {
    if (!(W > 0.0)) throw std::invalid_argument("vehicle: weight W must be positive");
    if (!(B > W)) throw std::invalid_argument("vehicle: buoyancy B must exceed weight W");
    if (!(m > 0.0 && I_xx > 0.0 && I_yy > 0.0 && I_zz > 0.0))
        throw std::invalid_argument("vehicle: mass and inertias must be positive");
    for (double a : {X_du, Y_dv, Z_dw, K_dp, M_dq, N_dr})
        if (!(a < 0.0)) throw std::invalid_argument("vehicle: added-mass coefficients must be negative");
    for (double d : {X_uu, Y_vv, Z_ww, K_pp, M_qq, N_rr})
        if (!(d > 0.0)) throw std::invalid_argument("vehicle: drag coefficients must be positive");
    if (!(l_1 > 0.0 && l_2 > 0.0 && R > 0.0 && rho > 0.0 && thrust_max > 0.0))
        throw std::invalid_argument("vehicle: geometry, density and thrust bound must be positive");
}

void VehicleParams::set(const std::string& key, double value) {
    bool found = false;
    for_each_field(*this, [&](const char* name, double& field) {
        if (key == name) {
            field = value;
            found = true;
        }
    });
    if (!found) throw std::invalid_argument("vehicle: unknown parameter '" + key + "'");
}

std::map<std::string, double> VehicleParams::as_map() const {
    std::map<std::string, double> out;
    auto copy = *this;
    for_each_field(copy, [&](const char* name, double& field) { out[name] = field; });
    return out;
}

VehicleParams load_vehicle_params(const std::filesystem::path& path) {
    VehicleParams p;
    for (const auto& entry : read_kv_file(path)) {
        if (!entry.section.empty() && entry.section != "vehicle")
            throw std::invalid_argument(path.string() + ":" + std::to_string(entry.line) +
                                        ": unexpected section [" + entry.section + "]");
        p.set(entry.key, parse_double(entry));
    }
    p.validate();
    return p;
}

}  // namespace auvmpc
