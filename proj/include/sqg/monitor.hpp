#pragma once

#include "sqg/grid.hpp"
#include "sqg/modulus.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace sqg {

double sup_norm(const RealField& f);
double gradient_sup(const RealField& f); // spectral gradient, then pointwise norm max

struct EmpiricalModulus {
    std::vector<double> xi;      // requested separations, increasing
    std::vector<double> omega_m; // running max over displacements within each xi
    bool exact = true;           // false when displacements were subsampled
};

// sup over torus pairs at distance <= xi of |theta(x) - theta(y)|, computed by
// cyclic shifts; exact over the grid for n <= 256, strided sampling above
EmpiricalModulus empirical_modulus(const RealField& theta,
                                   const std::vector<double>& xi_samples);

struct BreakthroughRecord {
    double x[2] = {0.0, 0.0};
    double y[2] = {0.0, 0.0};
    double separation = 0.0;
    double slack = 0.0; // theta(x) - theta(y) - omega_mu(separation)
    double t = 0.0;     // filled in by the trajectory loop
};

struct MocScan {
    double max_slack = 0.0;
    BreakthroughRecord argmax;
    bool exact = true;
};

// slack over every per-distance displacement bin coarser than one cell; the
// scan radius stops where omega_mu clears 2 sup|theta| by more than the
// tolerance, since no pair can break through beyond that separation. the
// single-cell axis bin is excluded: a pair scan cannot certify strict
// inequality at its own resolution, so sub-cell separations are certified by
// the chord-slope test in check_moc instead
MocScan moc_scan(const RealField& theta, const std::function<double(double)>& omega_mu,
                 double tol);

// near-breakthrough detector: a record when the best scan slack is >= -tol,
// or when the chord test grad * dx < omega_mu(dx) covering separations up to
// one cell fails
std::optional<BreakthroughRecord> check_moc(const RealField& theta,
                                            const std::function<double(double)>& omega_mu,
                                            double tol);

// omega_mu(xi) = mu^{2s-1} omega(mu xi), mu^{2s} = 2 ||grad theta0||_inf
class RescaledModulus {
public:
    RescaledModulus(const KnvModulus& m, double mu);
    double operator()(double xi) const;
    double slope0() const; // mu^{2s}
    double mu() const { return mu_; }
    const KnvModulus& base() const { return m_; }

private:
    KnvModulus m_;
    double mu_;
};

RescaledModulus rescaled_modulus(const KnvModulus& m, const RealField& theta0);

struct SmallnessResult {
    double product = 0.0; // ||grad theta0||^{1-2s} ||theta0||^{2s}
    double c_s = 0.0;
    bool pass = false;
    bool pass_equivalent = false; // 2||theta0|| <= omega_mu(delta/mu)
    bool degenerate = false;      // gradient-free field, mu undefined
};

SmallnessResult smallness_check(const RealField& theta0, const KnvModulus& m);

struct TrajectoryReport {
    std::vector<double> times;
    std::vector<double> sup_norms;
    std::vector<double> grad_sups;
    std::vector<double> bkm;       // running trapezoid of grad_sup
    std::vector<double> moc_slack; // NaN at samples where no check ran
    std::vector<char> grad_ok;
    std::vector<char> moc_ok;
    std::vector<BreakthroughRecord> events;
    double sup0 = 0.0;
    double grad0 = 0.0;
    bool blew_up = false;
    double blowup_t = 0.0;
    double blowup_sup = 0.0;
    bool subsampled = false;
};

bool gradient_bound_check(const TrajectoryReport& report, const RealField& theta0);

bool omega_prime_zero_bound(const RealField& theta, double slope_at_zero);

double bkm_accumulate(const TrajectoryReport& report);

} // namespace sqg
