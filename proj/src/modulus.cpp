#include "sqg/modulus.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sqg {

std::vector<ConstraintViolation> validate_params(const KnvParams& p) {
    std::vector<ConstraintViolation> out;
    auto require_below = [&](const char* name, double value, double bound, bool strict) {
        const bool bad = strict ? value >= bound : value > bound;
        if (bad) out.push_back({name, value, bound, value - bound});
    };
    auto require_above = [&](const char* name, double value, double bound, bool strict) {
        const bool bad = strict ? value <= bound : value < bound;
        if (bad) out.push_back({name, value, bound, bound - value});
    };

    require_above("s_range", p.s, 0.0, true);
    require_below("s_range", p.s, 0.5, true);
    require_above("delta_positive", p.delta, 0.0, true);
    require_above("gamma_positive", p.gamma, 0.0, true);
    require_above("r_range", p.r, 1.0, true);
    require_below("r_range", p.r, 1.0 + 2.0 * p.s, true);
    require_above("alpha_range", p.alpha, 2.0 * p.s, true);
    require_below("alpha_range", p.alpha, 1.0, true);
    if (!out.empty()) return out; // derived bounds below assume sane ranges

    require_below("gamma_concavity", p.gamma,
                  1.0 - p.r * std::pow(p.delta, p.r - 1.0), true);
    require_below("gamma_alpha", p.gamma, p.alpha, false);
    require_below("gamma_half_one_minus_alpha", p.gamma, 0.5 * (1.0 - p.alpha), true);
    require_below("gamma_delta_2s", p.gamma, std::pow(p.delta, 2.0 * p.s), false);
    return out;
}

std::vector<ConstraintViolation> validate_params(const KnvModulus& m) {
    return validate_params(m.params());
}

KnvModulus::KnvModulus(const KnvParams& p) : p_(p) {
    const auto violations = validate_params(p);
    if (!violations.empty()) {
        std::ostringstream msg;
        msg << "invalid modulus parameters:";
        for (const auto& v : violations)
            msg << " " << v.name << " (value " << v.value << ", bound " << v.bound << ")";
        throw std::invalid_argument(msg.str());
    }
    omega_delta_ = p_.delta - std::pow(p_.delta, p_.r);
    k1_ = p_.gamma * std::pow(p_.delta, p_.alpha) / (1.0 - p_.alpha);
    k0_ = omega_delta_ - k1_ * std::pow(p_.delta, 1.0 - p_.alpha);
}

double KnvModulus::omega(double xi) const {
    if (xi < 0.0) throw std::invalid_argument("omega: xi must be >= 0");
    if (xi <= p_.delta) return xi - std::pow(xi, p_.r);
    return k0_ + k1_ * std::pow(xi, 1.0 - p_.alpha);
}

double KnvModulus::omega_prime(double xi) const {
    if (xi < 0.0) throw std::invalid_argument("omega_prime: xi must be >= 0");
    if (xi <= p_.delta) return 1.0 - p_.r * std::pow(xi, p_.r - 1.0);
    return p_.gamma * std::pow(xi / p_.delta, -p_.alpha);
}

double KnvModulus::omega_prime_right(double xi) const {
    if (xi < 0.0) throw std::invalid_argument("omega_prime_right: xi must be >= 0");
    if (xi < p_.delta) return 1.0 - p_.r * std::pow(xi, p_.r - 1.0);
    return p_.gamma * std::pow(xi / p_.delta, -p_.alpha);
}

double KnvModulus::omega_second(double xi) const {
    if (xi < 0.0) throw std::invalid_argument("omega_second: xi must be >= 0");
    if (xi <= p_.delta) return -p_.r * (p_.r - 1.0) * std::pow(xi, p_.r - 2.0);
    return -p_.alpha * k1_ * (1.0 - p_.alpha) * std::pow(xi, -p_.alpha - 1.0);
}

double KnvModulus::omega_second_right(double xi) const {
    if (xi < 0.0) throw std::invalid_argument("omega_second_right: xi must be >= 0");
    if (xi < p_.delta) return -p_.r * (p_.r - 1.0) * std::pow(xi, p_.r - 2.0);
    return -p_.alpha * k1_ * (1.0 - p_.alpha) * std::pow(xi, -p_.alpha - 1.0);
}

FarField KnvModulus::far() const {
    FarField f;
    f.K0 = k0_;
    f.K1 = k1_;
    f.p = 1.0 - p_.alpha;
    f.start = p_.delta;
    return f;
}

} // namespace sqg
