#include "sqg/init_data.hpp"

#include "sqg/errors.hpp"
#include "sqg/fft.hpp"
#include "sqg/kernels.hpp"
#include "sqg/spectral_ops.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

namespace sqg {

namespace {

struct ModeDraw {
    int k1, k2;
    double kabs;
    double a, b;
};

RealField assemble(const Grid& grid, const std::vector<ModeDraw>& draws, double tilt) {
    SpectralField spec(grid);
    for (const auto& m : draws) {
        const double w = std::pow(m.kabs, tilt);
        const std::complex<double> c(0.5 * m.a * w, -0.5 * m.b * w);
        spec.mode(m.k1, m.k2) = c;
        spec.mode(-m.k1, -m.k2) = std::conj(c);
    }
    return inverse_transform(spec);
}

struct Norms {
    double sup, grad;
};

Norms field_norms(const RealField& f) {
    const double sup = kernels::max_abs(f.v);
    const auto g = gradient(forward_transform(f));
    const double grad = kernels::max_gradient_norm(g.first.v, g.second.v);
    return {sup, grad};
}

void scale_field(RealField& f, double factor) {
    for (auto& x : f.v) x *= factor;
}

RealField make_single(const InitialDataSpec& spec, const Grid& grid) {
    if (spec.k1 == 0 && spec.k2 == 0)
        throw ConfigError("single-mode initial data needs a nonzero wavevector");
    const double kabs = std::hypot(spec.k1, spec.k2);
    double a = spec.amplitude;
    if (spec.target_sup > 0.0 && spec.target_grad > 0.0)
        throw ConfigError("single-mode initial data cannot hit independent sup and gradient "
                          "targets; set one of them");
    if (spec.target_sup > 0.0)
        a = spec.target_sup;
    else if (spec.target_grad > 0.0)
        a = spec.target_grad / kabs;
    RealField f(grid);
    const int n = grid.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            f.at(i, j) = a * std::cos(spec.k1 * grid.x(i) + spec.k2 * grid.x(j));
    return f;
}

RealField make_random(const InitialDataSpec& spec, const Grid& grid) {
    if (spec.modes < 1) throw ConfigError("random initial data needs modes >= 1");
    if (spec.modes > grid.n / 3)
        throw ConfigError("random initial data modes " + std::to_string(spec.modes) +
                          " exceeds the dealias band n/3 = " + std::to_string(grid.n / 3));

    // One generator, one fixed draw order; the tilt search below reuses the
    // same draws so the field depends only on (seed, modes, targets).
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<ModeDraw> draws;
    for (int k1 = 0; k1 <= spec.modes; ++k1) {
        const int lo = (k1 == 0) ? 1 : -spec.modes;
        for (int k2 = lo; k2 <= spec.modes; ++k2) {
            ModeDraw m;
            m.k1 = k1;
            m.k2 = k2;
            m.kabs = std::hypot(k1, k2);
            m.a = unit(rng);
            m.b = unit(rng);
            draws.push_back(m);
        }
    }

    const bool has_sup = spec.target_sup > 0.0;
    const bool has_grad = spec.target_grad > 0.0;
    if (has_sup != has_grad)
        throw ConfigError("random initial data needs both norm targets or neither");

    if (!has_sup) {
        RealField f = assemble(grid, draws, 0.0);
        const double sup = kernels::max_abs(f.v);
        scale_field(f, spec.amplitude / sup);
        return f;
    }

    const double want = spec.target_grad / spec.target_sup;
    double t_lo = -6.0, t_hi = 6.0;
    const auto ratio_at = [&](double t) {
        const Norms nm = field_norms(assemble(grid, draws, t));
        return nm.grad / nm.sup;
    };
    const double r_lo = ratio_at(t_lo);
    const double r_hi = ratio_at(t_hi);
    if (want < r_lo || want > r_hi) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "norm ratio grad/sup = %.6g outside the reachable range [%.6g, %.6g] "
                      "for modes = %d",
                      want, r_lo, r_hi, spec.modes);
        throw ConfigError(buf);
    }
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (t_lo + t_hi);
        if (ratio_at(mid) < want)
            t_lo = mid;
        else
            t_hi = mid;
    }
    const double t = 0.5 * (t_lo + t_hi);
    RealField f = assemble(grid, draws, t);
    const Norms nm = field_norms(f);
    scale_field(f, spec.target_grad / nm.grad);
    return f;
}

} // namespace

RealField generate_initial_data(const InitialDataSpec& spec) {
    const Grid grid(spec.n);
    if (spec.kind == "single") return make_single(spec, grid);
    if (spec.kind == "random") return make_random(spec, grid);
    throw ConfigError("unknown initial data kind '" + spec.kind + "'");
}

} // namespace sqg
