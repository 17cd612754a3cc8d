#pragma once

#include "sqg/grid.hpp"
#include "sqg/monitor.hpp"

#include <functional>

namespace sqg {

struct SolverConfig {
    double s = 0.25;
    double kappa = 1.0;
    int n = 128;
    double t_end = 1.0;
    double cfl = 0.4;
    double dt_max = 0.05;
    double eps_floor = 1e-12;
    bool dealias = true;
    double sample_dt = 0.1;
    double moc_dt = 0.0; // 0 = modulus checks only at the final sample

    bool supercritical() const { return s < 0.5; }
};

// throws ConfigError; s in [1/2, 1) is accepted (comparison runs) but is
// outside the regime the certificates speak to, see supercritical()
void validate_config(const SolverConfig& cfg);

struct State {
    SpectralField theta;
    double t = 0.0;
};

double cfl_dt(const RealField& u1, const RealField& u2, const Grid& grid,
              const SolverConfig& cfg);

// one integrating-factor RK4 step of the given size
State step_dt(const State& state, const SolverConfig& cfg, double dt);

// step with CFL-chosen dt
State step(const State& state, const SolverConfig& cfg);

struct MonitorHooks {
    // modulus the trajectory is checked against; empty = no modulus checks
    std::function<double(double)> omega_mu;
    // called at every sample with the current field and time
    std::function<void(const RealField&, double)> on_sample;
    // fixed breakthrough tolerance; 0 = per-sample default ||grad theta|| dx
    double moc_tol = 0.0;
};

// integrate to t_end, sampling diagnostics on the sample_dt lattice; steps are
// clamped to sample boundaries so a resumed run retraces the same steps
TrajectoryReport run(const RealField& theta0, const SolverConfig& cfg,
                     const MonitorHooks& hooks = {});

// same loop from a mid-trajectory state (snapshot resume); the sample lattice
// stays anchored at t = 0
TrajectoryReport run_from(const State& start, const SolverConfig& cfg,
                          const MonitorHooks& hooks = {});

} // namespace sqg
