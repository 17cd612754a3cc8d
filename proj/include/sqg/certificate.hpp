#pragma once

#include "sqg/modulus.hpp"

#include <cstddef>
#include <limits>
#include <vector>

namespace sqg {

struct CertificateConstants {
    double A = 1.0;      // Riesz-transform modulus constant
    double C_diss = 1.0; // dissipation representation constant
    double C_prime = 1.0; // far-field convection case-bound constant
    double kappa = 1.0;  // dissipation coefficient
};

struct DominanceReport {
    std::vector<double> xi_grid;
    std::vector<double> convection;  // Omega(xi) * omega'(xi)
    std::vector<double> dissipation; // kappa * C_diss * D(xi)
    std::vector<double> margin;      // sum; pass requires < 0 throughout
    bool pass = false;
    double worst_margin = -std::numeric_limits<double>::infinity();
    std::size_t worst_index = 0;
};

struct DissipationResult {
    double value = 0.0;
    double err_est = 0.0;
    double near_part = 0.0; // integral over eta in (0, xi/2)
    double far_part = 0.0;  // integral over eta in (xi/2, inf)
};

// Omega(xi) = A [ int_0^xi omega/eta + xi int_xi^inf omega/eta^2 ], quadrature with
// an analytic power-law tail. Omega(0) = 0 without quadrature.
double riesz_modulus(const Modulus& m, double xi, double A, double tol = 1e-11,
                     double* err_est = nullptr);

// closed-form route for the piecewise KNV modulus, kept independent of the
// quadrature path so the two can cross-check each other
double riesz_modulus_closed(const KnvModulus& m, double xi, double A);

DissipationResult dissipation_functional(const Modulus& m, double xi, double s,
                                         double tol = 1e-10);
DissipationResult dissipation_functional(const KnvModulus& m, double xi,
                                         double tol = 1e-10);

double dominance_margin(const KnvModulus& m, double xi, const CertificateConstants& k);

// log-spaced grid, per_decade points per decade, spanning `decades` decades
// centered at delta (so delta itself is a grid point)
std::vector<double> make_xi_grid(double delta, int decades = 12, int per_decade = 64);

DominanceReport dominance_report(const KnvModulus& m, const std::vector<double>& xi_grid,
                                 const CertificateConstants& k);

// fitted constants for the closed-form case bounds
struct CaseBoundFit {
    double c_near = 0.0; // dissipation <= -kappa C_diss c_near xi^{r-2s} on xi <= delta
    double c_prime = 0.0; // convection <= A gamma omega (c' + log(xi/delta)) (xi/delta)^{-alpha}
    double c_far = 0.0;  // dissipation <= -kappa C_diss c_far xi^{-2s} omega(xi)
};

CaseBoundFit fit_case_bounds(const KnvModulus& m, const CertificateConstants& k);

struct CaseBounds {
    double convection = 0.0;
    double dissipation = 0.0;
};

// analytic per-regime upper bounds; fit == nullptr refits from scratch
CaseBounds case_bounds(const KnvModulus& m, double xi, const CertificateConstants& k,
                       const CaseBoundFit* fit = nullptr);

struct SearchResult {
    bool found = false;
    KnvParams params;
    DominanceReport report;
    double best_margin = std::numeric_limits<double>::infinity();
    int tried = 0;
};

// r and alpha fixed at regime midpoints, geometric descent on delta with
// gamma at half the tightest constraint bound; absence of a certificate is a
// regular outcome, not an error
SearchResult find_admissible(double s, const CertificateConstants& k, int budget = 40);

double smallness_constant(const KnvModulus& m);

// worst signed violation of delta^alpha xi^{1-alpha} <= ((1-alpha)/gamma) omega(xi)
// over grid points > delta; <= 0 means pass
double growth_comparison_check(const KnvModulus& m, const std::vector<double>& xi_grid);

// inf over grid points > delta of 2 - omega(2 xi)/omega(xi)
double doubling_deficit(const KnvModulus& m, const std::vector<double>& xi_grid);

} // namespace sqg
