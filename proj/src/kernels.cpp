#include "sqg/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace sqg::kernels {

void apply_multiplier(std::vector<std::complex<double>>& c, const std::vector<double>& m) {
    if (c.size() != m.size()) throw std::invalid_argument("multiplier size mismatch");
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(c.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) c[i] *= m[i];
}

void apply_multiplier_serial(std::vector<std::complex<double>>& c, const std::vector<double>& m) {
    if (c.size() != m.size()) throw std::invalid_argument("multiplier size mismatch");
    for (size_t i = 0; i < c.size(); ++i) c[i] *= m[i];
}

void advection_product(const std::vector<double>& u1, const std::vector<double>& u2,
                       const std::vector<double>& g1, const std::vector<double>& g2,
                       std::vector<double>& out) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = u1[i] * g1[i] + u2[i] * g2[i];
}

void advection_product_serial(const std::vector<double>& u1, const std::vector<double>& u2,
                              const std::vector<double>& g1, const std::vector<double>& g2,
                              std::vector<double>& out) {
    for (size_t i = 0; i < out.size(); ++i) out[i] = u1[i] * g1[i] + u2[i] * g2[i];
}

double max_abs(const std::vector<double>& v) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(v.size());
    double m = 0.0;
#pragma omp parallel for reduction(max : m) schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) m = std::max(m, std::fabs(v[i]));
    return m;
}

double max_abs_serial(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

double max_gradient_norm(const std::vector<double>& gx, const std::vector<double>& gy) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(gx.size());
    double m = 0.0;
#pragma omp parallel for reduction(max : m) schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) m = std::max(m, gx[i] * gx[i] + gy[i] * gy[i]);
    return std::sqrt(m);
}

double max_gradient_norm_serial(const std::vector<double>& gx, const std::vector<double>& gy) {
    double m = 0.0;
    for (size_t i = 0; i < gx.size(); ++i) m = std::max(m, gx[i] * gx[i] + gy[i] * gy[i]);
    return std::sqrt(m);
}

bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

bool all_finite(const std::vector<std::complex<double>>& c) {
    for (const auto& z : c)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

DisplacementMax displacement_max(const std::vector<double>& v, int n, int d1, int d2) {
    DisplacementMax best{0.0, 0, 0, false};
    const int s1 = (d1 % n + n) % n;
    const int s2 = (d2 % n + n) % n;
    for (int i = 0; i < n; ++i) {
        const int is = (i + s1) % n;
        const double* row = v.data() + static_cast<size_t>(i) * n;
        const double* rows = v.data() + static_cast<size_t>(is) * n;
        for (int j = 0; j < n; ++j) {
            const int js = j + s2 < n ? j + s2 : j + s2 - n;
            const double diff = rows[js] - row[j];
            if (std::fabs(diff) > best.value) {
                best.value = std::fabs(diff);
                best.xi = i;
                best.xj = j;
                best.negated = diff < 0.0;
            }
        }
    }
    return best;
}

std::vector<DisplacementMax> displacement_scan(const std::vector<double>& v, int n,
                                               const std::vector<std::pair<int, int>>& disp) {
    std::vector<DisplacementMax> out(disp.size());
    const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(disp.size());
#pragma omp parallel for schedule(dynamic, 8)
    for (std::ptrdiff_t i = 0; i < m; ++i)
        out[i] = displacement_max(v, n, disp[i].first, disp[i].second);
    return out;
}

std::vector<DisplacementMax> displacement_scan_serial(const std::vector<double>& v, int n,
                                                      const std::vector<std::pair<int, int>>& disp) {
    std::vector<DisplacementMax> out(disp.size());
    for (size_t i = 0; i < disp.size(); ++i)
        out[i] = displacement_max(v, n, disp[i].first, disp[i].second);
    return out;
}

} // namespace sqg::kernels
