#pragma once

// Grid kernels: every hot loop exists twice, an OpenMP version used in
// production and a serial reference used by tests and the benchmark.

#include <complex>
#include <cstddef>
#include <vector>

namespace sqg::kernels {

// c[i] *= m[i]
void apply_multiplier(std::vector<std::complex<double>>& c, const std::vector<double>& m);
void apply_multiplier_serial(std::vector<std::complex<double>>& c, const std::vector<double>& m);

// out[i] = u1[i]*g1[i] + u2[i]*g2[i]
void advection_product(const std::vector<double>& u1, const std::vector<double>& u2,
                       const std::vector<double>& g1, const std::vector<double>& g2,
                       std::vector<double>& out);
void advection_product_serial(const std::vector<double>& u1, const std::vector<double>& u2,
                              const std::vector<double>& g1, const std::vector<double>& g2,
                              std::vector<double>& out);

double max_abs(const std::vector<double>& v);
double max_abs_serial(const std::vector<double>& v);

// max over grid points of sqrt(gx^2 + gy^2)
double max_gradient_norm(const std::vector<double>& gx, const std::vector<double>& gy);
double max_gradient_norm_serial(const std::vector<double>& gx, const std::vector<double>& gy);

bool all_finite(const std::vector<double>& v);
bool all_finite(const std::vector<std::complex<double>>& c);

struct DisplacementMax {
    double value; // sup_x |v(x+d) - v(x)|
    int xi, xj;   // argmax grid point
    bool negated; // true when the max difference is v(x) - v(x+d)
};

// per-displacement sup of |v(x+d) - v(x)| over the periodic grid
DisplacementMax displacement_max(const std::vector<double>& v, int n, int d1, int d2);

// scan a list of displacements (parallel over the list)
std::vector<DisplacementMax> displacement_scan(const std::vector<double>& v, int n,
                                               const std::vector<std::pair<int, int>>& disp);
std::vector<DisplacementMax> displacement_scan_serial(const std::vector<double>& v, int n,
                                                      const std::vector<std::pair<int, int>>& disp);

} // namespace sqg::kernels
