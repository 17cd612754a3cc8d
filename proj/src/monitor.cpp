#include "sqg/monitor.hpp"

#include "sqg/certificate.hpp"
#include "sqg/fft.hpp"
#include "sqg/kernels.hpp"
#include "sqg/spectral_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

namespace sqg {

double sup_norm(const RealField& f) { return kernels::max_abs(f.v); }

double gradient_sup(const RealField& f) {
    const auto g = gradient(forward_transform(f));
    return kernels::max_gradient_norm(g.first.v, g.second.v);
}

namespace {

struct DisplacementSet {
    std::vector<std::pair<int, int>> disp; // canonical half-space, min-image components
    bool exact = true;
};

// canonical representatives of d ~ -d: d1 > 0, or d1 == 0 and d2 > 0; for
// d1 == n/2 the mirror (n/2, -d2) is the same displacement, so keep d2 >= 0
DisplacementSet enumerate_displacements(int n, double cap_cells) {
    DisplacementSet out;
    const int half = n / 2;
    const double cap2 = cap_cells * cap_cells;
    if (n <= 256) {
        for (int d1 = 0; d1 <= half; ++d1) {
            int lo = -half + 1, hi = half;
            if (d1 == 0) lo = 1;
            if (d1 == half) lo = 0;
            for (int d2 = lo; d2 <= hi; ++d2) {
                if (static_cast<double>(d1) * d1 + static_cast<double>(d2) * d2 > cap2)
                    continue;
                out.disp.emplace_back(d1, d2);
            }
        }
        return out;
    }

    // strided: exhaustive near field, log-spaced radial/angular sample beyond
    std::set<std::pair<int, int>> seen;
    const double near = std::min(16.0, cap_cells);
    const int nr = static_cast<int>(near);
    for (int d1 = 0; d1 <= nr; ++d1) {
        const int lo = (d1 == 0) ? 1 : -nr;
        for (int d2 = lo; d2 <= nr; ++d2) {
            if (static_cast<double>(d1) * d1 + static_cast<double>(d2) * d2 > near * near)
                continue;
            seen.emplace(d1, d2);
        }
    }
    if (cap_cells > 16.0) {
        out.exact = false;
        const double growth = std::pow(10.0, 1.0 / 16.0);
        for (double rad = 17.0; rad <= cap_cells; rad *= growth) {
            for (int a = 0; a < 64; ++a) {
                const double phi = a * M_PI / 64.0;
                int d1 = static_cast<int>(std::lround(rad * std::cos(phi)));
                int d2 = static_cast<int>(std::lround(rad * std::sin(phi)));
                if (d1 < 0 || (d1 == 0 && d2 < 0)) {
                    d1 = -d1;
                    d2 = -d2;
                }
                if (d1 == 0 && d2 == 0) continue;
                if (d1 > half || std::abs(d2) > half) continue;
                seen.emplace(d1, d2);
            }
        }
    }
    out.disp.assign(seen.begin(), seen.end());
    return out;
}

double cell_distance(const std::pair<int, int>& d) {
    return std::sqrt(static_cast<double>(d.first) * d.first +
                     static_cast<double>(d.second) * d.second);
}

} // namespace

EmpiricalModulus empirical_modulus(const RealField& theta,
                                   const std::vector<double>& xi_samples) {
    EmpiricalModulus out;
    out.xi = xi_samples;
    std::sort(out.xi.begin(), out.xi.end());
    out.omega_m.assign(out.xi.size(), 0.0);
    if (out.xi.empty()) return out;

    const int n = theta.grid.n;
    const double dx = theta.grid.dx();
    const double cap_cells =
        std::min(out.xi.back() / dx * (1.0 + 1e-12), std::hypot(n / 2.0, n / 2.0));
    DisplacementSet ds = enumerate_displacements(n, cap_cells);
    out.exact = ds.exact;
    const auto maxima = kernels::displacement_scan(theta.v, n, ds.disp);

    std::vector<std::pair<double, double>> by_dist; // (distance, sup diff)
    by_dist.reserve(ds.disp.size());
    for (size_t i = 0; i < ds.disp.size(); ++i)
        by_dist.emplace_back(cell_distance(ds.disp[i]) * dx, maxima[i].value);
    std::sort(by_dist.begin(), by_dist.end());

    double running = 0.0;
    size_t j = 0;
    for (size_t i = 0; i < out.xi.size(); ++i) {
        while (j < by_dist.size() && by_dist[j].first <= out.xi[i] * (1.0 + 1e-12)) {
            running = std::max(running, by_dist[j].second);
            ++j;
        }
        out.omega_m[i] = running;
    }
    return out;
}

MocScan moc_scan(const RealField& theta, const std::function<double(double)>& omega_mu,
                 double tol) {
    const int n = theta.grid.n;
    const double dx = theta.grid.dx();
    const double len = theta.grid.length;
    const double sup = sup_norm(theta);

    // pairs beyond this separation cannot break through: the empirical modulus
    // is capped at 2 sup while omega_mu keeps growing
    const double target = 2.0 * sup + std::max(tol, 0.2 * sup);
    const double r_max = len / std::sqrt(2.0);
    double cap = dx;
    while (cap < r_max && omega_mu(cap) < target) cap *= 1.25;
    cap = std::min(cap, r_max);

    MocScan out;
    out.max_slack = -std::numeric_limits<double>::infinity();

    DisplacementSet ds = enumerate_displacements(n, cap / dx);
    out.exact = ds.exact;
    if (ds.disp.empty()) return out;
    const auto maxima = kernels::displacement_scan(theta.v, n, ds.disp);

    // best sup-difference per distinct torus distance; the q == 1 bin sits at
    // the scan's own resolution and is certified by the chord test instead
    std::map<long, size_t> best; // d1^2+d2^2 -> index into ds/maxima
    for (size_t i = 0; i < ds.disp.size(); ++i) {
        const long q = static_cast<long>(ds.disp[i].first) * ds.disp[i].first +
                       static_cast<long>(ds.disp[i].second) * ds.disp[i].second;
        if (q == 1) continue;
        auto it = best.find(q);
        if (it == best.end() || maxima[i].value > maxima[it->second].value) best[q] = i;
    }

    for (const auto& [q, idx] : best) {
        const double xi = dx * std::sqrt(static_cast<double>(q));
        const double slack = maxima[idx].value - omega_mu(xi);
        if (slack <= out.max_slack) continue;
        out.max_slack = slack;
        const auto& m = maxima[idx];
        const auto& d = ds.disp[idx];
        const int si = (m.xi + d.first) % n;
        const int sj = ((m.xj + d.second) % n + n) % n;
        // order the pair so theta(x) - theta(y) is the positive difference
        const bool shifted_is_high = !m.negated;
        const int hi_i = shifted_is_high ? si : m.xi;
        const int hi_j = shifted_is_high ? sj : m.xj;
        const int lo_i = shifted_is_high ? m.xi : si;
        const int lo_j = shifted_is_high ? m.xj : sj;
        out.argmax.x[0] = theta.grid.x(hi_i);
        out.argmax.x[1] = theta.grid.x(hi_j);
        out.argmax.y[0] = theta.grid.x(lo_i);
        out.argmax.y[1] = theta.grid.x(lo_j);
        out.argmax.separation = xi;
        out.argmax.slack = slack;
    }
    return out;
}

std::optional<BreakthroughRecord> check_moc(const RealField& theta,
                                            const std::function<double(double)>& omega_mu,
                                            double tol) {
    const MocScan scan = moc_scan(theta, omega_mu, tol);
    if (scan.max_slack >= -tol && std::isfinite(scan.max_slack)) return scan.argmax;
    // mean value theorem: pairs separated by at most one cell stay below
    // omega_mu as long as the gradient stays below the chord slope at dx
    const double dx = theta.grid.dx();
    const double gap = gradient_sup(theta) * dx - omega_mu(dx);
    if (gap >= 0.0) {
        BreakthroughRecord rec;
        rec.separation = dx;
        rec.slack = gap;
        return rec;
    }
    return std::nullopt;
}

RescaledModulus::RescaledModulus(const KnvModulus& m, double mu) : m_(m), mu_(mu) {
    if (!(mu > 0.0)) throw std::invalid_argument("rescaled_modulus: mu must be positive");
}

double RescaledModulus::operator()(double xi) const {
    return std::pow(mu_, 2.0 * m_.params().s - 1.0) * m_.omega(mu_ * xi);
}

double RescaledModulus::slope0() const { return std::pow(mu_, 2.0 * m_.params().s); }

RescaledModulus rescaled_modulus(const KnvModulus& m, const RealField& theta0) {
    const double g = gradient_sup(theta0);
    if (!(g > 0.0))
        throw std::invalid_argument("rescaled_modulus: constant field, mu undefined");
    const double mu = std::pow(2.0 * g, 1.0 / (2.0 * m.params().s));
    return RescaledModulus(m, mu);
}

SmallnessResult smallness_check(const RealField& theta0, const KnvModulus& m) {
    SmallnessResult out;
    const double sup = sup_norm(theta0);
    const double grad = gradient_sup(theta0);
    const double s = m.params().s;
    out.c_s = smallness_constant(m);
    out.product = std::pow(grad, 1.0 - 2.0 * s) * std::pow(sup, 2.0 * s);
    out.pass = out.product < out.c_s;
    out.degenerate = !(grad > 0.0) || !(sup > 0.0);
    if (out.degenerate) {
        out.pass_equivalent = out.pass;
        return out;
    }
    const RescaledModulus omu = rescaled_modulus(m, theta0);
    out.pass_equivalent = 2.0 * sup <= omu(m.params().delta / omu.mu());
    return out;
}

bool gradient_bound_check(const TrajectoryReport& report, const RealField& theta0) {
    const double bound = 2.0 * gradient_sup(theta0) * (1.0 + 1e-10);
    for (double g : report.grad_sups)
        if (!(g < bound)) return false;
    return true;
}

bool omega_prime_zero_bound(const RealField& theta, double slope_at_zero) {
    return gradient_sup(theta) <= slope_at_zero * (1.0 + 1e-10) + 1e-14;
}

double bkm_accumulate(const TrajectoryReport& report) {
    double acc = 0.0;
    for (size_t i = 0; i + 1 < report.times.size(); ++i)
        acc += 0.5 * (report.grad_sups[i] + report.grad_sups[i + 1]) *
               (report.times[i + 1] - report.times[i]);
    return acc;
}

} // namespace sqg
