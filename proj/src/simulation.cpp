#include "auvmpc/simulation.hpp"

#include "auvmpc/dynamics.hpp"
#include "auvmpc/pid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace auvmpc {

double SimLog::average_solve_time() const {
    return steps.empty() ? 0.0 : total_solve_time / static_cast<double>(steps.size());
}

double SimLog::solver_fraction() const {
    return steps.empty() ? 0.0 : static_cast<double>(solver_calls) / static_cast<double>(steps.size());
}

void SimLog::write_trace_csv(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "t,x,y,z,phi,theta,psi,u,v,w,p,q,r,T1,T2,T3,T4,T_total,solver_invoked,solve_time_s,"
           "predicted_cost_J\n";
    char buf[512];
    for (const auto& s : steps) {
        const auto& e = s.state.eta;
        const auto& n = s.state.nu;
        std::snprintf(buf, sizeof buf,
                      "%.4f,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,"
                      "%.9g,%.9g,%.9g,%.9g,%.9g,%d,%.6e,%.9g\n",
                      s.t, e[0], e[1], e[2], e[3], e[4], e[5], n[0], n[1], n[2], n[3], n[4], n[5],
                      s.thrusters.T1, s.thrusters.T2, s.thrusters.T3, s.thrusters.T4, s.decision.thrust,
                      s.decision.solver_invoked ? 1 : 0, s.decision.solve_time, s.decision.predicted_cost);
        out << buf;
    }
}

std::unique_ptr<SurgeController> make_controller(const Scenario& sc) {
    const MpcConfig cfg = sc.mpc_config();
    switch (sc.controller) {
        case ControllerKind::tracking:
            return std::make_unique<HorizonController>(CostKind::tracking, sc.vehicle, cfg);
        case ControllerKind::energy_optimal:
            return std::make_unique<HorizonController>(CostKind::energy_optimal, sc.vehicle, cfg);
        case ControllerKind::real_time:
            return std::make_unique<RteoController>(sc.vehicle, cfg, sc.switch_config());
    }
    throw std::invalid_argument("make_controller: unknown controller kind");
}

SimLog run_scenario(const Scenario& sc) {
    sc.validate();
    const Plant plant(sc.vehicle);
    auto controller = make_controller(sc);
    Pid depth(sc.pid.depth), pitch(sc.pid.pitch), yaw(sc.pid.yaw);

    SimLog log;
    log.controller = controller->name();
    log.dt = sc.dt;

    VehicleState s;
    s.eta[0] = sc.x0;
    s.nu[0] = sc.u0;
    const double arrival = sc.xf - sc.stop_tolerance;
    const auto max_steps = static_cast<long>(std::ceil(sc.max_time / sc.dt - 1e-9));
    const double h = sc.dt / sc.plant_substeps;

    long k = 0;
    log.arrived = s.x() >= arrival;
    while (!log.arrived && k < max_steps) {
        StepRecord rec;
        rec.t = static_cast<double>(k) * sc.dt;
        rec.state = s;
        rec.decision = controller->decide(s);

        const double tau_Z = depth.step(0.0, s.eta[2], sc.dt);
        const double tau_M = pitch.step(0.0, s.eta[4], sc.dt);
        const double tau_N = yaw.step(0.0, s.eta[5], sc.dt);
        const MixResult mixed = mix(rec.decision.thrust, tau_M, tau_N, tau_Z, sc.vehicle);
        rec.thrusters = mixed.thrusters;
        rec.mixer_saturated = mixed.saturated;

        if (rec.decision.solver_invoked) {
            ++log.solver_calls;
            log.total_solve_time += rec.decision.solve_time;
            log.max_solve_time = std::max(log.max_solve_time, rec.decision.solve_time);
        }
        log.ledger.add(rec.thrusters, sc.dt, sc.vehicle);
        log.steps.push_back(rec);

        const GeneralizedForce tau = thruster_allocation(rec.thrusters, sc.vehicle);
        try {
            for (int i = 0; i < sc.plant_substeps; ++i) s = plant.step(s, tau, h);
        } catch (const SingularTransformError& e) {
            log.error = std::string("plant aborted at t=") + std::to_string(rec.t) + ": " + e.what();
            break;
        }
        ++k;
        log.arrived = s.x() >= arrival;
    }
    log.final_state = s;
    log.ledger.travel_time = static_cast<double>(log.steps.size()) * sc.dt;
    log.max_time_exceeded = !log.arrived && log.error.empty();
    return log;
}

EnvelopeAudit audit_envelope(const SimLog& log, double thrust_bound) {
    EnvelopeAudit a;
    auto check = [&](double value, double bound, const char* channel, double t) {
        const double r = std::abs(value) / bound;
        if (r > a.worst_ratio) {
            a.worst_ratio = r;
            a.worst_channel = channel;
            a.worst_time = t;
        }
    };
    auto check_state = [&](const VehicleState& s, double t) {
        check(s.eta[1], 0.01, "y", t);
        check(s.eta[2], 0.005, "z", t);
        check(s.eta[3], 0.2, "phi", t);
        check(s.eta[4], 0.01, "theta", t);
        check(s.eta[5], 0.01, "psi", t);
    };
    for (const auto& r : log.steps) {
        check_state(r.state, r.t);
        check(r.decision.thrust, thrust_bound, "T_total", r.t);
        check(r.thrusters.T1 + r.thrusters.T2, thrust_bound, "T1+T2", r.t);
    }
    check_state(log.final_state, log.ledger.travel_time);
    return a;
}

}  // namespace auvmpc
