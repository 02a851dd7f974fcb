#include "auvmpc/scenario.hpp"

#include "auvmpc/energy.hpp"
#include "auvmpc/kvfile.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace auvmpc {

std::string to_string(ControllerKind k) {
    switch (k) {
        case ControllerKind::tracking: return "tmpc";
        case ControllerKind::energy_optimal: return "eompc";
        case ControllerKind::real_time: return "rteo";
    }
    return "unknown";
}

ControllerKind parse_controller_kind(const std::string& s) {
    if (s == "tmpc" || s == "T-MPC") return ControllerKind::tracking;
    if (s == "eompc" || s == "EO-MPC") return ControllerKind::energy_optimal;
    if (s == "rteo" || s == "RTEO-MPC") return ControllerKind::real_time;
    throw std::invalid_argument("unknown controller '" + s + "' (expected tmpc, eompc or rteo)");
}

Scenario Scenario::reference() {
    Scenario sc;
    sc.x_switch_margin = 2.0;
    return sc;
}

MpcConfig Scenario::mpc_config() const {
    MpcConfig c = mpc;
    c.destination = xf;
    c.dt = dt;
    return c;
}

SwitchConfig Scenario::switch_config() const {
    SwitchConfig sw = SwitchConfig::defaults(vehicle, xf);
    if (u_switch_low) sw.u_low = *u_switch_low;
    if (u_switch_high) sw.u_high = *u_switch_high;
    if (x_switch_margin) sw.x_switch = xf - *x_switch_margin;
    if (x_switch) sw.x_switch = *x_switch;
    return sw;
}

void Scenario::validate() const {
    vehicle.validate();
    if (xf < x0) throw std::invalid_argument("scenario: xf must not precede x0");
    if (u0 < 0.0) throw std::invalid_argument("scenario: u0 must be non-negative");
    if (!(dt > 0.0)) throw std::invalid_argument("scenario: dt must be positive");
    if (!(stop_tolerance >= 0.0)) throw std::invalid_argument("scenario: stop_tolerance must be non-negative");
    if (!(max_time > 0.0)) throw std::invalid_argument("scenario: max_time must be positive");
    if (plant_substeps < 1) throw std::invalid_argument("scenario: plant_substeps must be at least 1");
    mpc_config().validate();
    pid.depth.validate();
    pid.pitch.validate();
    pid.yaw.validate();
}

namespace {

[[noreturn]] void unknown_key(const std::string& origin, const KvEntry& e) {
    throw std::invalid_argument(origin + ":" + std::to_string(e.line) + ": unknown key '" + e.key +
                                "' in section [" + e.section + "]");
}

bool set_pid(PidGains& g, const std::string& field, const KvEntry& e) {
    if (field == "kp") g.kp = parse_double(e);
    else if (field == "ki") g.ki = parse_double(e);
    else if (field == "kd") g.kd = parse_double(e);
    else if (field == "output_limit") g.output_limit = parse_double(e);
    else if (field == "integral_limit") g.integral_limit = parse_double(e);
    else if (field == "feedforward") g.feedforward = parse_double(e);
    else return false;
    return true;
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& origin) {
    Scenario sc;
    const auto entries = parse_kv_text(text, origin);

    // vehicle first: the default PID tuning depends on it
    for (const auto& e : entries) {
        if (e.section == "vehicle") {
            if (!sc.vehicle.as_map().contains(e.key)) unknown_key(origin, e);
            sc.vehicle.set(e.key, parse_double(e));
        }
    }
    sc.vehicle.validate();
    sc.pid = AutopilotGains::tuned(sc.vehicle);

    for (const auto& e : entries) {
        const std::string& k = e.key;
        if (e.section == "vehicle") continue;
        if (e.section == "scenario") {
            if (k == "x0") sc.x0 = parse_double(e);
            else if (k == "xf") sc.xf = parse_double(e);
            else if (k == "u0") sc.u0 = parse_double(e);
            else if (k == "dt") sc.dt = parse_double(e);
            else if (k == "stop_tolerance") sc.stop_tolerance = parse_double(e);
            else if (k == "max_time") sc.max_time = parse_double(e);
            else if (k == "plant_substeps") sc.plant_substeps = parse_int(e);
            else unknown_key(origin, e);
        } else if (e.section == "controller") {
            if (k == "type") sc.controller = parse_controller_kind(e.value);
            else if (k == "horizon") sc.mpc.horizon = parse_int(e);
            else if (k == "thrust_min") sc.mpc.thrust_min = parse_double(e);
            else if (k == "thrust_max") sc.mpc.thrust_max = parse_double(e);
            else if (k == "speed_floor") sc.mpc.speed_floor = parse_double(e);
            else if (k == "max_iterations") sc.mpc.solver.max_iterations = parse_int(e);
            else if (k == "tolerance") sc.mpc.solver.tolerance = parse_double(e);
            else if (k == "warm_start") sc.mpc.warm_start = parse_bool(e);
            else if (k == "u_switch_low") sc.u_switch_low = parse_double(e);
            else if (k == "u_switch_high") sc.u_switch_high = parse_double(e);
            else if (k == "x_switch") sc.x_switch = parse_double(e);
            else if (k == "x_switch_margin") sc.x_switch_margin = parse_double(e);
            else unknown_key(origin, e);
        } else if (e.section == "pid") {
            const auto us = k.find('_');
            if (us == std::string::npos) unknown_key(origin, e);
            const std::string loop = k.substr(0, us), field = k.substr(us + 1);
            PidGains* g = loop == "depth" ? &sc.pid.depth
                          : loop == "pitch" ? &sc.pid.pitch
                          : loop == "yaw"   ? &sc.pid.yaw
                                            : nullptr;
            if (!g || !set_pid(*g, field, e)) unknown_key(origin, e);
        } else {
            throw std::invalid_argument(origin + ":" + std::to_string(e.line) + ": unknown section [" +
                                        e.section + "]");
        }
    }
    sc.validate();
    return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), path.string());
}

}  // namespace auvmpc
