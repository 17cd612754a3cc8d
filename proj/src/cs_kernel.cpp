#include "sqg/cs_kernel.hpp"

#include "sqg/errors.hpp"
#include "sqg/fft.hpp"
#include "sqg/spectral_ops.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace sqg {

namespace {

constexpr double TWO_PI = 2.0 * std::numbers::pi;

// bracket offset a(h) and numerator prefactor per kernel form
double bracket_a(double h, double s, KernelForm form) {
    return form == KernelForm::paper ? 4.0 * s * s * std::pow(h, 1.0 / s) : h * h;
}
double prefactor(double h, double s, KernelForm form) {
    return form == KernelForm::paper ? h : std::pow(h, 2.0 * s);
}

double real_binom(double alpha, int j) {
    double b = 1.0;
    for (int i = 1; i <= j; ++i) b *= (alpha - i + 1) / i;
    return b;
}

// int_R^inf (x^2 + a)^{-q} dx = sum_j binom(-q,j) a^j R^{-(2q-1+2j)} / (2q-1+2j)
double power_tail_1d(double R, double a, double q) {
    double out = 0.0;
    for (int j = 0; j < 12; ++j) {
        const double expo = 2.0 * q - 1.0 + 2.0 * j;
        out += real_binom(-q, j) * std::pow(a, j) * std::pow(R, -expo) / expo;
    }
    return out;
}

} // namespace

double cs_normalization(int n, double s, KernelForm form) {
    if (n != 1 && n != 2) throw std::invalid_argument("cs_normalization: n must be 1 or 2");
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("cs_normalization: s must be in (0,1)");
    const double h = 1.0;
    const double a = bracket_a(h, s, form);
    const double q = 0.5 * n + s;
    const double R = 50.0 * std::sqrt(a + 1.0);
    double integral = 0.0;
    namespace bq = boost::math::quadrature;
    if (n == 2) {
        auto f = [&](double rho) { return TWO_PI * rho * std::pow(rho * rho + a, -q); };
        double err = 0.0;
        integral = bq::gauss_kronrod<double, 61>::integrate(f, 0.0, R, 12, 1e-13, &err);
        if (err > 1e-8 * std::fabs(integral))
            throw QuadratureError("cs_normalization quadrature did not converge", err);
        integral += TWO_PI * std::pow(R * R + a, -s) / (2.0 * s); // exact radial tail
    } else {
        auto f = [&](double x) { return 2.0 * std::pow(x * x + a, -q); };
        double err = 0.0;
        integral = bq::gauss_kronrod<double, 61>::integrate(f, 0.0, R, 12, 1e-13, &err);
        if (err > 1e-8 * std::fabs(integral))
            throw QuadratureError("cs_normalization quadrature did not converge", err);
        integral += 2.0 * power_tail_1d(R, a, q);
    }
    return 1.0 / (prefactor(h, s, form) * integral);
}

CsKernelParams make_cs_params(int n, double s, KernelForm form) {
    CsKernelParams p;
    p.n = n;
    p.s = s;
    p.form = form;
    p.c_norm = cs_normalization(n, s, form);
    return p;
}

double cs_kernel_value(const double* x, double h, const CsKernelParams& p) {
    if (!(h > 0.0)) throw std::invalid_argument("cs_kernel_value: h must be positive");
    double r2 = 0.0;
    for (int i = 0; i < p.n; ++i) r2 += x[i] * x[i];
    const double a = bracket_a(h, p.s, p.form);
    return p.c_norm * prefactor(h, p.s, p.form) * std::pow(r2 + a, -(0.5 * p.n + p.s));
}

double cs_mass_deviation(double h, const CsKernelParams& p) {
    if (!(h > 0.0)) throw std::invalid_argument("cs_mass_deviation: h must be positive");
    const double a = bracket_a(h, p.s, p.form);
    const double q = 0.5 * p.n + p.s;
    const double pref = p.c_norm * prefactor(h, p.s, p.form);
    // tanh_sinh on two subranges plus series tail: deliberately a different
    // scheme from the gauss_kronrod used to compute the normalization
    namespace bq = boost::math::quadrature;
    bq::tanh_sinh<double> integrator;
    const double R1 = std::sqrt(a) + 1.0, R2 = 80.0 * R1;
    double integral = 0.0;
    if (p.n == 2) {
        auto f = [&](double rho) { return TWO_PI * rho * std::pow(rho * rho + a, -q); };
        integral = integrator.integrate(f, 0.0, R1) + integrator.integrate(f, R1, R2);
        integral += TWO_PI * std::pow(R2 * R2 + a, -p.s) / (2.0 * p.s);
    } else {
        auto f = [&](double x) { return 2.0 * std::pow(x * x + a, -q); };
        integral = integrator.integrate(f, 0.0, R1) + integrator.integrate(f, R1, R2);
        integral += 2.0 * power_tail_1d(R2, a, q);
    }
    return std::fabs(pref * integral - 1.0);
}

double kernel_marginal_check(double s, double h, double tol, KernelForm form) {
    if (!(h > 0.0)) throw std::invalid_argument("kernel_marginal_check: h must be positive");
    const CsKernelParams p2 = make_cs_params(2, s, form);
    const CsKernelParams p1 = make_cs_params(1, s, form);
    const double a = bracket_a(h, s, form);
    const double scale = std::sqrt(a) + 1.0;
    namespace bq = boost::math::quadrature;
    double worst = 0.0;
    for (double m : {0.0, 0.2, 0.5, 1.0, 2.0, 5.0}) {
        for (double sign : {1.0, -1.0}) {
            const double x1 = sign * m * scale;
            const double b = x1 * x1 + a;
            auto f = [&](double x2) {
                const double x[2] = {x1, x2};
                return 2.0 * cs_kernel_value(x, h, p2);
            };
            const double T = 60.0 * std::sqrt(b);
            double err = 0.0;
            double marg = bq::gauss_kronrod<double, 61>::integrate(f, 0.0, T, 12,
                                                                   0.1 * tol, &err);
            // tail: 2 C pref int_T^inf (x2^2 + b)^{-(1+s)} dx2
            marg += 2.0 * p2.c_norm * prefactor(h, s, form) * power_tail_1d(T, b, 1.0 + s);
            const double ref = cs_kernel_value(&x1, h, p1);
            worst = std::max(worst, std::fabs(marg - ref));
            if (m == 0.0) break;
        }
    }
    return worst;
}

int pick_fine_grid(double h, double s, int n, KernelForm form) {
    const double sa = std::sqrt(bracket_a(h, s, form));
    const double need = (22.0 + std::max(0.0, -std::log(h))) / sa + n / 3.0;
    int nf = std::max(2 * n, 64);
    while (nf < need && nf < 4096) nf *= 2;
    return nf;
}

int pick_image_count(double /*h*/, double /*s*/) { return 8; }

namespace {

// octant sampling core shared by the parallel and serial variants
void fill_octant(std::vector<double>& oct, int nf, double h, double L,
                 const CsKernelParams& p, int M, bool parallel) {
    const double a = bracket_a(h, p.s, p.form);
    const double q = 0.5 * p.n + p.s;
    const double pref = p.c_norm * prefactor(h, p.s, p.form);
    const int half = nf / 2;
    const double dx = L / nf;

    // constant correction: kernel mass outside the image box, spread uniformly
    const double W = (M + 0.5) * L;
    double om = 0.0;
    const int na = 512;
    for (int i = 0; i < na; ++i) {
        const double phi = (i + 0.5) * TWO_PI / na;
        const double rc = W / std::max(std::fabs(std::cos(phi)), std::fabs(std::sin(phi)));
        om += std::pow(rc * rc + a, -p.s);
    }
    om *= pref * TWO_PI / (na * 2.0 * p.s * L * L);

    auto row = [&](int i) {
        const double x = i * dx;
        double* out = oct.data() + static_cast<size_t>(i) * (half + 1);
        for (int j = 0; j <= i; ++j) {
            const double y = j * dx;
            double sum = 0.0;
            for (int mx = -M; mx <= M; ++mx) {
                const double rx = x + mx * L;
                const double rx2 = rx * rx;
                for (int my = -M; my <= M; ++my) {
                    const double ry = y + my * L;
                    sum += std::pow(rx2 + ry * ry + a, -q);
                }
            }
            out[j] = pref * sum + om;
        }
    };

    if (parallel) {
#pragma omp parallel for schedule(dynamic, 4)
        for (int i = 0; i <= half; ++i) row(i);
    } else {
        for (int i = 0; i <= half; ++i) row(i);
    }
}

std::vector<double> assemble_from_octant(const std::vector<double>& oct, int nf) {
    const int half = nf / 2;
    std::vector<double> out(static_cast<size_t>(nf) * nf);
    for (int i = 0; i <= half; ++i)
        for (int j = 0; j <= i; ++j) {
            const double v = oct[static_cast<size_t>(i) * (half + 1) + j];
            const int ii[2] = {i, (nf - i) % nf};
            const int jj[2] = {j, (nf - j) % nf};
            for (int ai : ii)
                for (int aj : jj) {
                    out[static_cast<size_t>(ai) * nf + aj] = v;
                    out[static_cast<size_t>(aj) * nf + ai] = v;
                }
        }
    return out;
}

} // namespace

std::vector<double> sample_periodized_kernel(int nf, double h, double L,
                                             const CsKernelParams& p, int images) {
    std::vector<double> oct(static_cast<size_t>(nf / 2 + 1) * (nf / 2 + 1), 0.0);
    fill_octant(oct, nf, h, L, p, images, true);
    return assemble_from_octant(oct, nf);
}

std::vector<double> sample_periodized_kernel_serial(int nf, double h, double L,
                                                    const CsKernelParams& p, int images) {
    std::vector<double> oct(static_cast<size_t>(nf / 2 + 1) * (nf / 2 + 1), 0.0);
    fill_octant(oct, nf, h, L, p, images, false);
    return assemble_from_octant(oct, nf);
}

std::vector<double> default_h_ladder(double s) {
    if (s < 0.35) return {1.6, 0.8, 0.4, 0.2};
    if (s < 0.45) return {0.8, 0.4, 0.2, 0.1, 0.05};
    return {0.4, 0.2, 0.1, 0.05, 0.025};
}

namespace {

struct BandMultipliers {
    int band = 0; // tables are (band+1) x (band+1), indexed by |k1|, |k2|
    std::vector<std::vector<double>> quotient; // per ladder level
    std::vector<double> extrapolated;
    LadderDiagnostics diag;
};

double& tbl(std::vector<double>& t, int band, int k1, int k2) {
    return t[static_cast<size_t>(k1) * (band + 1) + k2];
}
double tbl(const std::vector<double>& t, int band, int k1, int k2) {
    return t[static_cast<size_t>(k1) * (band + 1) + k2];
}

BandMultipliers compute_band_multipliers(double s, int n, double L,
                                         const std::vector<double>& hs, KernelForm form) {
    BandMultipliers bm;
    bm.band = n / 3;
    bm.diag.hs = hs;
    const CsKernelParams p = make_cs_params(2, s, form);
    const size_t tsize = static_cast<size_t>(bm.band + 1) * (bm.band + 1);

    for (double h : hs) {
        const int nf = pick_fine_grid(h, s, n, form);
        const int M = pick_image_count(h, s);
        std::vector<double> per = sample_periodized_kernel(nf, h, L, p, M);
        std::vector<std::complex<double>> phat = r2c_transform(per, nf);
        const double scale = (L * L) / (static_cast<double>(nf) * nf);
        std::vector<double> quot(tsize);
        for (int k1 = 0; k1 <= bm.band; ++k1)
            for (int k2 = 0; k2 <= bm.band; ++k2) {
                const std::complex<double> tp =
                    phat[static_cast<size_t>(k1) * (nf / 2 + 1) + k2];
                tbl(quot, bm.band, k1, k2) = (tp.real() * scale - 1.0) / h;
            }
        bm.diag.nf.push_back(nf);
        bm.diag.images.push_back(M);
        bm.diag.mass_err.push_back(tbl(quot, bm.band, 0, 0) * h);
        bm.diag.quotient_mode10.push_back(tbl(quot, bm.band, 1, 0));
        // the operator annihilates the mean identically; the raw k = 0 entry
        // is pure mass error and stays visible in the diagnostics above
        tbl(quot, bm.band, 0, 0) = 0.0;
        bm.quotient.push_back(std::move(quot));
    }

    // leading order from the finest triple at mode (1,0)
    const size_t L3 = hs.size();
    bool ok = L3 >= 3;
    double p_emp = 1.0;
    if (ok) {
        const double v0 = bm.diag.quotient_mode10[L3 - 3];
        const double v1 = bm.diag.quotient_mode10[L3 - 2];
        const double v2 = bm.diag.quotient_mode10[L3 - 1];
        const double d1 = v1 - v0, d2 = v2 - v1;
        const double R = hs[L3 - 2] / hs[L3 - 1];
        if (d1 * d2 > 0.0 && std::fabs(d1) > std::fabs(d2)) {
            p_emp = std::log(std::fabs(d1 / d2)) / std::log(R);
            ok = p_emp > 0.05 && p_emp < 8.0;
        } else {
            ok = false;
        }
    }
    bm.diag.p_emp = ok ? p_emp : 0.0;
    bm.diag.converged = ok;

    if (!ok) {
        bm.extrapolated = bm.quotient.back();
        return bm;
    }

    // Neville tableau: successive error orders p_emp, p_emp+1, ...
    std::vector<std::vector<double>> V = bm.quotient;
    std::vector<double> hh = hs;
    int stage = 0;
    while (V.size() > 1) {
        std::vector<std::vector<double>> V2;
        for (size_t i = 0; i + 1 < V.size(); ++i) {
            const double R = hh[i] / hh[i + 1];
            const double den = std::pow(R, p_emp + stage) - 1.0;
            std::vector<double> next(tsize);
            for (size_t t = 0; t < tsize; ++t)
                next[t] = V[i + 1][t] + (V[i + 1][t] - V[i][t]) / den;
            V2.push_back(std::move(next));
        }
        hh.erase(hh.begin());
        V = std::move(V2);
        ++stage;
    }
    bm.extrapolated = std::move(V[0]);
    return bm;
}

// ladder evaluations are expensive; cache per (s, n, form, ladder)
const BandMultipliers& cached_band_multipliers(double s, int n, double L,
                                               const std::vector<double>& hs,
                                               KernelForm form) {
    static std::map<std::tuple<double, int, int, std::vector<double>>, BandMultipliers> cache;
    static std::mutex m;
    std::lock_guard<std::mutex> lock(m);
    auto key = std::make_tuple(s, n, static_cast<int>(form), hs);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, compute_band_multipliers(s, n, L, hs, form)).first;
    return it->second;
}

} // namespace

RealField cs_fractional_laplacian(const RealField& theta, double s,
                                  std::vector<double> h_ladder, KernelForm form,
                                  LadderDiagnostics* diag) {
    if (!(s > 0.0 && s < 1.0))
        throw std::invalid_argument("cs_fractional_laplacian: s must be in (0,1)");
    if (h_ladder.empty()) h_ladder = default_h_ladder(s);
    if (!std::is_sorted(h_ladder.rbegin(), h_ladder.rend()) || h_ladder.back() <= 0.0)
        throw std::invalid_argument("cs_fractional_laplacian: ladder must decrease toward 0");
    const int n = theta.grid.n;
    const BandMultipliers& bm =
        cached_band_multipliers(s, n, theta.grid.length, h_ladder, form);
    if (diag) *diag = bm.diag;

    SpectralField c = forward_transform(theta);
    SpectralField out(theta.grid);
    for (int i = 0; i < n; ++i) {
        const int k1 = std::abs(c.grid.freq(i));
        if (k1 > bm.band) continue;
        for (int j = 0; j < n; ++j) {
            const int k2 = std::abs(c.grid.freq(j));
            if (k2 > bm.band) continue;
            out.at(i, j) = c.at(i, j) * tbl(bm.extrapolated, bm.band, k1, k2);
        }
    }
    return inverse_transform(out);
}

RepresentationFit estimate_representation_constant(double s, KernelForm form, int n) {
    RepresentationFit fit;
    const Grid g(n);
    const std::vector<std::pair<int, int>> basis = {{1, 0}, {2, 0}, {0, 2}, {3, 1}};
    std::vector<double> ladder = default_h_ladder(s);

    for (auto [a1, a2] : basis) {
        RealField f(g);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) f.at(i, j) = std::cos(a1 * g.x(i) + a2 * g.x(j));
        LadderDiagnostics d;
        RealField kern = cs_fractional_laplacian(f, s, ladder, form, &d);
        fit.ladder = d;
        RealField spec = inverse_transform(fractional_laplacian_spectral(forward_transform(f), s));
        double num = 0.0, den = 0.0;
        for (size_t t = 0; t < kern.v.size(); ++t) {
            num += spec.v[t] * (-kern.v[t]);
            den += kern.v[t] * kern.v[t];
        }
        fit.mode_constants.push_back(num / den);
    }
    double mean = 0.0;
    for (double c : fit.mode_constants) mean += c;
    mean /= static_cast<double>(fit.mode_constants.size());
    fit.C = mean;
    double worst = 0.0;
    for (double c : fit.mode_constants) worst = std::max(worst, std::fabs(c - mean) / mean);
    fit.residual = worst;
    fit.converged = fit.ladder.converged && fit.C > 0.0 && fit.residual <= 1e-2;
    return fit;
}

} // namespace sqg
