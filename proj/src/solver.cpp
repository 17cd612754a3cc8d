#include "sqg/solver.hpp"

#include "sqg/errors.hpp"
#include "sqg/fft.hpp"
#include "sqg/kernels.hpp"
#include "sqg/spectral_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sqg {

void validate_config(const SolverConfig& cfg) {
    if (!(cfg.s > 0.0 && cfg.s < 1.0)) throw ConfigError("s must be in (0, 1)");
    if (!(cfg.kappa >= 0.0)) throw ConfigError("kappa must be >= 0");
    if (cfg.n < 8 || cfg.n % 2 != 0) throw ConfigError("n must be even and >= 8");
    if (!(cfg.t_end >= 0.0)) throw ConfigError("t_end must be >= 0");
    if (!(cfg.cfl > 0.0 && cfg.cfl <= 1.0)) throw ConfigError("cfl must be in (0, 1]");
    if (!(cfg.dt_max > 0.0)) throw ConfigError("dt_max must be positive");
    if (!(cfg.eps_floor > 0.0)) throw ConfigError("eps_floor must be positive");
    if (!(cfg.sample_dt > 0.0)) throw ConfigError("sample_dt must be positive");
    if (!(cfg.moc_dt >= 0.0)) throw ConfigError("moc_dt must be >= 0");
}

double cfl_dt(const RealField& u1, const RealField& u2, const Grid& grid,
              const SolverConfig& cfg) {
    const double umax = std::max(
        {kernels::max_abs(u1.v), kernels::max_abs(u2.v), cfg.eps_floor});
    return std::min(cfg.dt_max, cfg.cfl * grid.dx() / umax);
}

namespace {

// N(theta_hat) = -dealias(transform(u . grad theta))
SpectralField nonlinear_term(const SpectralField& th, bool do_dealias) {
    const auto u = riesz_velocity(th);
    const auto g = gradient(th);
    RealField adv(th.grid);
    kernels::advection_product(u.first.v, u.second.v, g.first.v, g.second.v, adv.v);
    SpectralField out = forward_transform(adv);
    if (do_dealias) out = dealias(out);
    for (auto& c : out.c) c = -c;
    return out;
}

} // namespace

State step_dt(const State& state, const SolverConfig& cfg, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_dt: dt must be positive");
    // cap the entry magnitude so a diverging state is reported as a blow-up
    // instead of overflowing inside a stage product; the quadratic term squares
    // the state four times per step, so the cap sits many orders below the
    // overflow frontier while staying far above any physical field
    double peak = 0.0;
    for (const auto& z : state.theta.c)
        peak = std::max({peak, std::abs(z.real()), std::abs(z.imag())});
    if (!std::isfinite(peak) || peak > 1e8) throw BlowupError(state.t, peak);
    const Grid& grid = state.theta.grid;
    const int n = grid.n;
    const size_t total = static_cast<size_t>(n) * n;

    std::vector<double> ef(total), eh(total); // exp(-lambda dt), exp(-lambda dt/2)
    for (int i = 0; i < n; ++i) {
        const double k1 = grid.k(i);
        for (int j = 0; j < n; ++j) {
            const double k2 = grid.k(j);
            const double k2norm = k1 * k1 + k2 * k2;
            const double lam = k2norm > 0.0 ? cfg.kappa * std::pow(k2norm, cfg.s) : 0.0;
            ef[static_cast<size_t>(i) * n + j] = std::exp(-lam * dt);
            eh[static_cast<size_t>(i) * n + j] = std::exp(-lam * 0.5 * dt);
        }
    }

    const SpectralField& th = state.theta;
    const SpectralField n1 = nonlinear_term(th, cfg.dealias);

    SpectralField stage(grid);
    for (size_t i = 0; i < total; ++i)
        stage.c[i] = eh[i] * (th.c[i] + 0.5 * dt * n1.c[i]);
    const SpectralField n2 = nonlinear_term(stage, cfg.dealias);

    for (size_t i = 0; i < total; ++i)
        stage.c[i] = eh[i] * th.c[i] + 0.5 * dt * n2.c[i];
    const SpectralField n3 = nonlinear_term(stage, cfg.dealias);

    for (size_t i = 0; i < total; ++i)
        stage.c[i] = ef[i] * th.c[i] + dt * eh[i] * n3.c[i];
    const SpectralField n4 = nonlinear_term(stage, cfg.dealias);

    State out{SpectralField(grid), state.t + dt};
    const double w = dt / 6.0;
    for (size_t i = 0; i < total; ++i)
        out.theta.c[i] = ef[i] * th.c[i] +
                         w * (ef[i] * n1.c[i] + 2.0 * eh[i] * (n2.c[i] + n3.c[i]) + n4.c[i]);
    enforce_hermitian(out.theta);
    if (!kernels::all_finite(out.theta.c))
        throw BlowupError(out.t, std::numeric_limits<double>::quiet_NaN());
    return out;
}

State step(const State& state, const SolverConfig& cfg) {
    const auto u = riesz_velocity(state.theta);
    return step_dt(state, cfg, cfl_dt(u.first, u.second, state.theta.grid, cfg));
}

TrajectoryReport run(const RealField& theta0, const SolverConfig& cfg,
                     const MonitorHooks& hooks) {
    if (theta0.grid.n != cfg.n) throw ConfigError("run: theta0 grid does not match config n");
    SpectralField th = forward_transform(theta0);
    if (cfg.dealias) th = dealias(th);
    enforce_hermitian(th);
    return run_from(State{std::move(th), 0.0}, cfg, hooks);
}

TrajectoryReport run_from(const State& start, const SolverConfig& cfg,
                          const MonitorHooks& hooks) {
    validate_config(cfg);
    if (start.theta.grid.n != cfg.n)
        throw ConfigError("run: state grid does not match config n");
    State st = start;

    TrajectoryReport rep;
    {
        const RealField f0 = inverse_transform(st.theta);
        rep.sup0 = sup_norm(f0);
        rep.grad0 = gradient_sup(f0);
    }

    auto is_moc_time = [&](double t, bool final_sample) {
        if (!hooks.omega_mu) return false;
        if (final_sample) return true;
        if (cfg.moc_dt <= 0.0) return false;
        const double k = std::round(t / cfg.moc_dt);
        return std::fabs(t - k * cfg.moc_dt) <= 1e-9 * std::max(1.0, t);
    };

    auto take_sample = [&](const RealField& f, double t, bool final_sample) {
        const double sup = sup_norm(f);
        const double grad = gradient_sup(f);
        if (!rep.times.empty()) {
            const double prev_t = rep.times.back();
            rep.bkm.push_back(rep.bkm.back() +
                              0.5 * (rep.grad_sups.back() + grad) * (t - prev_t));
        } else {
            rep.bkm.push_back(0.0);
        }
        rep.times.push_back(t);
        rep.sup_norms.push_back(sup);
        rep.grad_sups.push_back(grad);
        rep.grad_ok.push_back(grad < 2.0 * rep.grad0 * (1.0 + 1e-10) ? 1 : 0);

        if (is_moc_time(t, final_sample)) {
            const double dx = f.grid.dx();
            const double tol = hooks.moc_tol > 0.0 ? hooks.moc_tol : grad * dx;
            const MocScan scan = moc_scan(f, hooks.omega_mu, tol);
            // sub-cell separations ride on the chord test, not the pair scan
            const double slope_gap = grad * dx - hooks.omega_mu(dx);
            rep.moc_slack.push_back(std::max(scan.max_slack, slope_gap));
            rep.subsampled = rep.subsampled || !scan.exact;
            const bool scan_hit = scan.max_slack >= -tol && std::isfinite(scan.max_slack);
            if (scan_hit || slope_gap >= 0.0) {
                BreakthroughRecord ev;
                if (scan_hit) {
                    ev = scan.argmax;
                } else {
                    ev.separation = dx;
                    ev.slack = slope_gap;
                }
                ev.t = t;
                rep.events.push_back(ev);
                rep.moc_ok.push_back(0);
            } else {
                rep.moc_ok.push_back(1);
            }
        } else {
            rep.moc_slack.push_back(std::numeric_limits<double>::quiet_NaN());
            rep.moc_ok.push_back(1);
        }
        if (hooks.on_sample) hooks.on_sample(f, t);
        if (rep.sup0 > 0.0 && sup > 10.0 * rep.sup0) throw BlowupError(t, sup);
    };

    try {
        {
            const RealField f0 = inverse_transform(st.theta);
            take_sample(f0, st.t, st.t >= cfg.t_end - 1e-12 * std::max(1.0, cfg.t_end));
        }
        while (st.t < cfg.t_end - 1e-12 * std::max(1.0, cfg.t_end)) {
            // next boundary on the absolute sample lattice, so a resumed run
            // reproduces the same step sequence
            const long idx = static_cast<long>(std::floor(st.t / cfg.sample_dt + 1e-9));
            const double next = std::min((idx + 1) * cfg.sample_dt, cfg.t_end);
            while (st.t < next - 1e-12 * std::max(1.0, next)) {
                const auto u = riesz_velocity(st.theta);
                double dt = cfl_dt(u.first, u.second, st.theta.grid, cfg);
                dt = std::min(dt, next - st.t);
                st = step_dt(st, cfg, dt);
            }
            st.t = next;
            const RealField f = inverse_transform(st.theta);
            const bool final_sample = next >= cfg.t_end - 1e-12 * std::max(1.0, cfg.t_end);
            take_sample(f, next, final_sample);
        }
    } catch (const BlowupError& e) {
        rep.blew_up = true;
        rep.blowup_t = e.t;
        rep.blowup_sup = e.sup_norm;
    }
    return rep;
}

} // namespace sqg
