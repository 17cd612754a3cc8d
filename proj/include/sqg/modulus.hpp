#pragma once

#include <string>
#include <vector>

namespace sqg {

// Exact power-law form of a modulus beyond some separation:
// omega(xi) = K0 + K1 * xi^p for xi >= start. Quadrature tails close on this.
struct FarField {
    double K0 = 0.0;
    double K1 = 0.0;
    double p = 0.5;
    double start = 0.0;
};

// Modulus of continuity with enough structure for the certificate quadratures:
// one-sided derivatives at kinks and an analytic far field.
class Modulus {
public:
    virtual ~Modulus() = default;
    virtual double omega(double xi) const = 0;
    // left values at kinks
    virtual double omega_prime(double xi) const = 0;
    virtual double omega_second(double xi) const = 0;
    // right values; identical to the left ones away from kinks
    virtual double omega_prime_right(double xi) const { return omega_prime(xi); }
    virtual double omega_second_right(double xi) const { return omega_second(xi); }
    virtual std::vector<double> kinks() const { return {}; }
    virtual FarField far() const = 0;
};

struct KnvParams {
    double delta = 0.01; // breakpoint between the two branches
    double gamma = 0.05; // far-field slope scale
    double r = 1.2;      // near-field exponent, in (1, 1+2s)
    double alpha = 0.6;  // far-field decay exponent, in (2s, 1)
    double s = 0.25;     // dissipation power, in (0, 1/2)
};

struct ConstraintViolation {
    std::string name;
    double value = 0.0;
    double bound = 0.0;
    double margin = 0.0; // how far past the bound the value sits (>= 0 when listed)
};

std::vector<ConstraintViolation> validate_params(const KnvParams& p);

// omega(xi) = xi - xi^r on [0, delta], then the gamma*(xi/delta)^{-alpha} slope
// branch: omega(delta) + (gamma delta^alpha / (1-alpha)) (xi^{1-alpha} - delta^{1-alpha}).
class KnvModulus final : public Modulus {
public:
    explicit KnvModulus(const KnvParams& p); // throws on constraint violations

    double omega(double xi) const override;
    double omega_prime(double xi) const override;
    double omega_second(double xi) const override;
    double omega_prime_right(double xi) const override;
    double omega_second_right(double xi) const override;
    std::vector<double> kinks() const override { return {p_.delta}; }
    FarField far() const override;

    const KnvParams& params() const { return p_; }
    double omega_delta() const { return omega_delta_; }

private:
    KnvParams p_;
    double omega_delta_ = 0.0;
    double k0_ = 0.0; // far-field constant term
    double k1_ = 0.0; // far-field power coefficient
};

std::vector<ConstraintViolation> validate_params(const KnvModulus& m);

inline double knv_omega(const KnvModulus& m, double xi) { return m.omega(xi); }
inline double knv_omega_prime(const KnvModulus& m, double xi) { return m.omega_prime(xi); }

} // namespace sqg
