#pragma once

#include "sqg/grid.hpp"

#include <optional>
#include <vector>

namespace sqg {

enum class KernelForm {
    paper,    // C h / (|x|^2 + 4 s^2 |h|^{1/s})^{n/2+s}
    standard, // C h^{2s} / (|x|^2 + h^2)^{(n+2s)/2}
};

struct CsKernelParams {
    int n = 2;       // spatial dimension, 1 or 2
    double s = 0.25; // power in (0,1)
    double c_norm = 0.0;
    KernelForm form = KernelForm::paper;
};

// normalization by radial quadrature with analytic power-law tail
double cs_normalization(int n, double s, KernelForm form = KernelForm::paper);
CsKernelParams make_cs_params(int n, double s, KernelForm form = KernelForm::paper);

// x points to p.n coordinates
double cs_kernel_value(const double* x, double h, const CsKernelParams& p);

// |integral of P_{n,h} over R^n - 1|, by quadrature independent of the
// normalization routine (different scheme and splitting)
double cs_mass_deviation(double h, const CsKernelParams& p);

// sup over sampled x1 of |int P_{2,h}(x1,x2) dx2 - P_{1,h}(x1)|
double kernel_marginal_check(double s, double h, double tol,
                             KernelForm form = KernelForm::paper);

struct LadderDiagnostics {
    std::vector<double> hs;
    std::vector<int> nf;          // fine-grid size per level
    std::vector<int> images;      // periodic image count per level
    std::vector<double> mass_err; // k=0 multiplier residual per level
    std::vector<double> quotient_mode10; // difference quotient at mode (1,0)
    double p_emp = 0.0;           // empirically estimated leading order
    bool converged = false;
};

// difference-quotient ladder (P_{2,h} * theta - theta)/h with Richardson
// (Neville) extrapolation of empirically estimated orders. theta must be
// dealiased. Empty ladder picks an s-appropriate default.
RealField cs_fractional_laplacian(const RealField& theta, double s,
                                  std::vector<double> h_ladder = {},
                                  KernelForm form = KernelForm::paper,
                                  LadderDiagnostics* diag = nullptr);

std::vector<double> default_h_ladder(double s);

struct RepresentationFit {
    double C = 0.0;        // fitted constant: kernel operator = C^{-1} * spectral? see below
    double residual = 1.0; // max relative cross-mode deviation
    bool converged = false;
    std::vector<double> mode_constants; // per-basis-mode fitted constants
    LadderDiagnostics ladder;
};

// least-squares fit of the extrapolated kernel operator against the spectral
// fractional Laplacian over a basis of eigenfunctions; C is the constant with
// -(-Delta)^s = C * d/dh [P * theta]|_{h->0}
RepresentationFit estimate_representation_constant(double s,
                                                   KernelForm form = KernelForm::paper,
                                                   int n = 64);

// internals exposed for tests and the benchmark
std::vector<double> sample_periodized_kernel(int nf, double h, double L,
                                             const CsKernelParams& p, int images);
std::vector<double> sample_periodized_kernel_serial(int nf, double h, double L,
                                                    const CsKernelParams& p, int images);
int pick_fine_grid(double h, double s, int n, KernelForm form);
int pick_image_count(double h, double s);

} // namespace sqg
