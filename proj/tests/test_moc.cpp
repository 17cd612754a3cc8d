#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sqg/certificate.hpp"
#include "sqg/errors.hpp"
#include "sqg/modulus.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace sqg;

namespace {

KnvParams reference_params() {
    return KnvParams{}; // delta 0.01, gamma 0.05, r 1.2, alpha 0.6, s 0.25
}

// linear up to 1, then flat; Omega(xi)/A = xi (2 + log(1/xi)) for xi <= 1
struct CappedLinear final : Modulus {
    double omega(double xi) const override { return xi < 1.0 ? xi : 1.0; }
    double omega_prime(double xi) const override { return xi <= 1.0 ? 1.0 : 0.0; }
    double omega_second(double) const override { return 0.0; }
    double omega_prime_right(double xi) const override { return xi < 1.0 ? 1.0 : 0.0; }
    std::vector<double> kinks() const override { return {1.0}; }
    FarField far() const override { return {1.0, 0.0, 0.5, 1.0}; }
};

// c times a base modulus, for homogeneity checks
struct Scaled final : Modulus {
    const Modulus& base;
    double c;
    Scaled(const Modulus& b, double c_) : base(b), c(c_) {}
    double omega(double xi) const override { return c * base.omega(xi); }
    double omega_prime(double xi) const override { return c * base.omega_prime(xi); }
    double omega_second(double xi) const override { return c * base.omega_second(xi); }
    double omega_prime_right(double xi) const override {
        return c * base.omega_prime_right(xi);
    }
    double omega_second_right(double xi) const override {
        return c * base.omega_second_right(xi);
    }
    std::vector<double> kinks() const override { return base.kinks(); }
    FarField far() const override {
        FarField f = base.far();
        f.K0 *= c;
        f.K1 *= c;
        return f;
    }
};

double bound_of(const std::vector<ConstraintViolation>& v, const std::string& name) {
    for (const auto& x : v)
        if (x.name == name) return x.bound;
    FAIL("violation " << name << " not reported");
    return 0.0;
}

bool has_violation(const std::vector<ConstraintViolation>& v, const std::string& name) {
    return std::any_of(v.begin(), v.end(),
                       [&](const ConstraintViolation& x) { return x.name == name; });
}

} // namespace

TEST_CASE("reference modulus frozen values") {
    const KnvModulus m(reference_params());
    CHECK(m.omega(0.0) == 0.0);
    CHECK(m.omega_delta() == doctest::Approx(6.018928294465027e-3).epsilon(1e-14));
    CHECK(m.omega(0.01) == doctest::Approx(6.018928294465027e-3).epsilon(1e-14));
    CHECK(m.omega_prime(0.01) == doctest::Approx(0.5222713953358034).epsilon(1e-14));
    // right slope at the kink is the far-branch slope gamma
    CHECK(m.omega_prime_right(0.01) == doctest::Approx(0.05).epsilon(1e-14));
    // continuity across the kink
    CHECK(m.omega(0.01 * (1.0 + 1e-13)) ==
          doctest::Approx(m.omega(0.01)).epsilon(1e-11));
}

TEST_CASE("constraint bounds at the reference point") {
    // gamma_max = min(0.52227, 0.6, 0.2, 0.1) = 0.1; recover each bound from
    // the violation report by pushing gamma past it
    KnvParams p = reference_params();

    p.gamma = 0.15;
    auto v = validate_params(p);
    REQUIRE(v.size() == 1);
    CHECK(v[0].name == "gamma_delta_2s");
    CHECK(v[0].bound == doctest::Approx(0.1).epsilon(1e-12));

    p.gamma = 0.21;
    v = validate_params(p);
    CHECK(has_violation(v, "gamma_half_one_minus_alpha"));
    CHECK(bound_of(v, "gamma_half_one_minus_alpha") == doctest::Approx(0.2).epsilon(1e-12));

    p.gamma = 0.61;
    v = validate_params(p);
    CHECK(has_violation(v, "gamma_alpha"));
    CHECK(bound_of(v, "gamma_alpha") == doctest::Approx(0.6).epsilon(1e-12));

    p.gamma = 0.55;
    v = validate_params(p);
    CHECK(has_violation(v, "gamma_concavity"));
    CHECK(bound_of(v, "gamma_concavity") ==
          doctest::Approx(0.5222713953358034).epsilon(1e-12));

    p.gamma = 0.0999999;
    CHECK(validate_params(p).empty());
}

TEST_CASE("range violations are reported before derived bounds") {
    KnvParams p = reference_params();
    p.r = 1.6; // outside (1, 1 + 2s) = (1, 1.5)
    auto v = validate_params(p);
    REQUIRE(v.size() == 1);
    CHECK(v[0].name == "r_range");

    p = reference_params();
    p.s = 0.5;
    CHECK(has_violation(validate_params(p), "s_range"));
    p.s = -0.1;
    CHECK(has_violation(validate_params(p), "s_range"));

    p = reference_params();
    p.alpha = 0.4; // needs alpha > 2s = 0.5
    CHECK(has_violation(validate_params(p), "alpha_range"));

    p = reference_params();
    p.gamma = 0.2;
    CHECK_THROWS_AS(KnvModulus{p}, std::invalid_argument);
}

TEST_CASE("concavity on random midpoint triples") {
    const KnvModulus m(reference_params());
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> logxi(std::log(1e-8), std::log(1e4));
    for (int i = 0; i < 10000; ++i) {
        double a = std::exp(logxi(rng));
        double b = std::exp(logxi(rng));
        if (a > b) std::swap(a, b);
        const double mid = 0.5 * (a + b);
        const double chord = 0.5 * (m.omega(a) + m.omega(b));
        CHECK(m.omega(mid) >= chord * (1.0 - 1e-12));
    }
}

TEST_CASE("modulus is increasing with decreasing slope") {
    const KnvModulus m(reference_params());
    double prev = 0.0, prev_slope = m.omega_prime(1e-9);
    for (double xi : make_xi_grid(0.01, 12, 16)) {
        const double w = m.omega(xi);
        CHECK(w > prev);
        prev = w;
        const double slope = m.omega_prime(xi);
        CHECK(slope > 0.0);
        CHECK(slope <= prev_slope * (1.0 + 1e-12));
        prev_slope = slope;
    }
}

TEST_CASE("riesz modulus of the capped-linear oracle") {
    const CappedLinear m;
    const double xi = std::exp(-1.0);
    CHECK(riesz_modulus(m, xi, 1.0) ==
          doctest::Approx(3.0 * std::exp(-1.0)).epsilon(1e-10));
    CHECK(riesz_modulus(m, 0.01, 1.0) ==
          doctest::Approx(0.01 * (2.0 + std::log(100.0))).epsilon(1e-10));
    // A-linearity
    CHECK(riesz_modulus(m, xi, 2.5) ==
          doctest::Approx(2.5 * riesz_modulus(m, xi, 1.0)).epsilon(1e-13));
    CHECK(riesz_modulus(m, 0.0, 1.0) == 0.0);
}

TEST_CASE("quadrature and closed-form riesz modulus agree") {
    const KnvModulus m(reference_params());
    for (double xi : {1e-6, 1e-4, 5e-3, 0.01, 0.02, 1.0, 1e3}) {
        const double closed = riesz_modulus_closed(m, xi, 1.0);
        double err = 0.0;
        const double quad = riesz_modulus(m, xi, 1.0, 1e-11, &err);
        CHECK(std::fabs(quad - closed) <= 1e-10 * std::max(1.0, std::fabs(closed)));
    }
}

TEST_CASE("riesz modulus respects scaling of the modulus") {
    const KnvModulus base(reference_params());
    const Scaled m(base, 3.0);
    for (double xi : {1e-4, 0.01, 0.7}) {
        CHECK(riesz_modulus(m, xi, 1.0) ==
              doctest::Approx(3.0 * riesz_modulus_closed(base, xi, 1.0)).epsilon(1e-9));
    }
}

TEST_CASE("riesz modulus is increasing, concave, and log-bounded near zero") {
    const KnvModulus m(reference_params());
    const double delta = m.params().delta;
    const auto grid = make_xi_grid(delta, 12, 16);
    std::vector<double> om(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) om[i] = riesz_modulus_closed(m, grid[i], 1.0);
    for (size_t i = 1; i < grid.size(); ++i) CHECK(om[i] > om[i - 1]);
    // concavity along the log grid
    for (size_t i = 1; i + 1 < grid.size(); ++i) {
        const double t = (grid[i] - grid[i - 1]) / (grid[i + 1] - grid[i - 1]);
        const double chord = om[i - 1] + t * (om[i + 1] - om[i - 1]);
        CHECK(om[i] >= chord * (1.0 - 1e-12));
    }
    // Omega(xi) <= A xi (3 + log(delta/xi)) below delta
    for (size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] > delta) break;
        CHECK(om[i] <= grid[i] * (3.0 + std::log(delta / grid[i])));
    }
}

TEST_CASE("dissipation functional is negative in both parts") {
    const KnvModulus m(reference_params());
    const double delta = m.params().delta;
    for (double xi : {1e-6 * delta, 0.01 * delta, 0.5 * delta, delta, 3.0 * delta,
                      100.0 * delta, 1e5 * delta}) {
        const DissipationResult d = dissipation_functional(m, xi);
        CHECK(d.near_part < 0.0);
        CHECK(d.far_part < 0.0);
        CHECK(d.value == doctest::Approx(d.near_part + d.far_part).epsilon(1e-14));
        CHECK(std::isfinite(d.err_est));
        CHECK(d.err_est < std::fabs(d.value));
    }
}

TEST_CASE("far part obeys the concavity tail bound") {
    // for eta >= xi/2, omega(2 eta + xi) - omega(2 eta - xi) <= omega(2 xi), so
    // J2 <= (omega(2 xi) - 2 omega(xi)) (xi/2)^{-2s} / (2s)
    const KnvModulus m(reference_params());
    const double s = m.params().s;
    for (double xi : {0.005, 0.01, 0.05, 1.0}) {
        const DissipationResult d = dissipation_functional(m, xi);
        const double bound = (m.omega(2.0 * xi) - 2.0 * m.omega(xi)) *
                             std::pow(0.5 * xi, -2.0 * s) / (2.0 * s);
        CHECK(d.far_part <= bound + 1e-12);
    }
}

TEST_CASE("refinement deltas stay within the error estimates") {
    const KnvModulus m(reference_params());
    for (double xi : {1e-5, 0.01, 0.3}) {
        DissipationResult coarse = dissipation_functional(m, xi, 1e-6);
        DissipationResult fine = dissipation_functional(m, xi, 1e-12);
        CHECK(std::fabs(coarse.value - fine.value) <= coarse.err_est + fine.err_est);

        double ec = 0.0, ef = 0.0;
        const double oc = riesz_modulus(m, xi, 1.0, 1e-7, &ec);
        const double of = riesz_modulus(m, xi, 1.0, 1e-13, &ef);
        CHECK(std::fabs(oc - of) <= ec + ef + 1e-15);
    }
}

TEST_CASE("dissipation scales like xi^{r-2s} below delta") {
    const KnvModulus m(reference_params());
    const KnvParams& p = m.params();
    // least-squares slope of log|D| against log xi over [1e-5 delta, 1e-3 delta]
    std::vector<double> lx, ly;
    for (double xi : make_xi_grid(p.delta, 12, 64)) {
        if (xi < 1e-5 * p.delta || xi > 1e-3 * p.delta) continue;
        lx.push_back(std::log(xi));
        ly.push_back(std::log(std::fabs(dissipation_functional(m, xi).value)));
    }
    REQUIRE(lx.size() > 100);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(lx.size());
    for (size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double expect = p.r - 2.0 * p.s;
    CHECK(std::fabs(slope - expect) / expect < 0.05);
}

TEST_CASE("kappa enters the margin linearly") {
    const KnvModulus m(reference_params());
    CertificateConstants k1;
    CertificateConstants k2;
    k2.kappa = 2.0;
    for (double xi : {1e-4, 0.01, 0.5}) {
        const double d = dissipation_functional(m, xi).value;
        const double m1 = dominance_margin(m, xi, k1);
        const double m2 = dominance_margin(m, xi, k2);
        CHECK(m2 - m1 == doctest::Approx(d).epsilon(1e-10));
        CHECK(m2 < m1); // more dissipation always helps
    }
}

TEST_CASE("dominance margin is negative at the kink for reference parameters") {
    const KnvModulus m(reference_params());
    CertificateConstants k;
    CHECK(dominance_margin(m, m.params().delta, k) < 0.0);
}

TEST_CASE("case bounds dominate the computed terms") {
    const KnvModulus m(reference_params());
    const KnvParams& p = m.params();
    CertificateConstants k;
    const CaseBoundFit fit = fit_case_bounds(m, k);
    CHECK(fit.c_near > 0.0);
    CHECK(fit.c_far > 0.0);

    for (double xi : make_xi_grid(p.delta, 12, 64)) {
        const CaseBounds cb = case_bounds(m, xi, k, &fit);
        const double conv = riesz_modulus_closed(m, xi, k.A) * m.omega_prime(xi);
        const double diss = k.kappa * k.C_diss * dissipation_functional(m, xi).value;
        CHECK(conv <= cb.convection * (1.0 + 1e-12));
        CHECK(diss <= cb.dissipation * (1.0 - 1e-12) + 1e-300);
    }
}

TEST_CASE("case-bound margin decays relative to omega in the far field") {
    // far-field form: margin/omega <= A gamma (C' + log(xi/delta)) (xi/delta)^{-alpha}
    //                                - kappa C c_far xi^{-2s}, which tends to 0 from below
    const KnvModulus m(reference_params());
    const KnvParams& p = m.params();
    CertificateConstants k;
    const CaseBoundFit fit = fit_case_bounds(m, k);
    double prev_ratio = -std::numeric_limits<double>::infinity();
    for (double decade = 2.0; decade <= 8.0; decade += 1.0) {
        const double xi = p.delta * std::pow(10.0, decade);
        const CaseBounds cb = case_bounds(m, xi, k, &fit);
        const double bound_ratio = (cb.convection + cb.dissipation) / m.omega(xi);
        CHECK(bound_ratio < 0.0);
        CHECK(bound_ratio > prev_ratio);
        prev_ratio = bound_ratio;
        const double margin = dominance_margin(m, xi, k);
        CHECK(margin / m.omega(xi) <= bound_ratio * (1.0 - 1e-9));
    }
    CHECK(std::fabs(prev_ratio) < 1e-2);
}

TEST_CASE("margin stays below the case-bound sum on the full grid") {
    const KnvModulus m(reference_params());
    CertificateConstants k;
    const CaseBoundFit fit = fit_case_bounds(m, k);
    for (double xi : make_xi_grid(m.params().delta)) {
        const CaseBounds cb = case_bounds(m, xi, k, &fit);
        const double margin = dominance_margin(m, xi, k);
        CHECK(margin <= cb.convection + cb.dissipation + 1e-15);
    }
}

TEST_CASE("dominance report passes for reference parameters") {
    const KnvModulus m(reference_params());
    CertificateConstants k;
    const auto grid = make_xi_grid(m.params().delta);
    CHECK(grid.size() == 769);
    // delta sits exactly at the center of the grid
    CHECK(grid[384] == doctest::Approx(0.01).epsilon(1e-15));
    const DominanceReport rep = dominance_report(m, grid, k);
    CHECK(rep.pass);
    CHECK(rep.worst_margin < 0.0);
    CHECK(rep.margin.size() == grid.size());
    for (size_t i = 0; i < grid.size(); ++i) {
        CHECK(rep.margin[i] == doctest::Approx(rep.convection[i] + rep.dissipation[i])
                                   .epsilon(1e-12));
        CHECK(rep.margin[i] < 0.0);
    }
    CHECK(rep.margin[rep.worst_index] == rep.worst_margin);
}

TEST_CASE("find_admissible certifies s = 0.25 and fails for kappa = 0") {
    CertificateConstants k;
    const SearchResult res = find_admissible(0.25, k);
    CHECK(res.found);
    CHECK(res.report.pass);
    CHECK(res.best_margin < 0.0);
    CHECK(validate_params(res.params).empty());
    CHECK(res.params.r == doctest::Approx(1.25));
    CHECK(res.params.alpha == doctest::Approx(0.75));

    CertificateConstants k0;
    k0.kappa = 0.0;
    const SearchResult none = find_admissible(0.25, k0, 3);
    CHECK_FALSE(none.found);
    CHECK(none.tried == 3);
}

TEST_CASE("smallness constant of the reference modulus") {
    const KnvModulus m(reference_params());
    CHECK(smallness_constant(m) == doctest::Approx(0.03879087616458613).epsilon(1e-14));
    // closed form: half of omega(delta)^{2s}
    CHECK(smallness_constant(m) ==
          doctest::Approx(0.5 * std::pow(0.01 - std::pow(0.01, 1.2), 0.5)).epsilon(1e-15));
}

TEST_CASE("growth comparison holds with equality approached at infinity") {
    const KnvModulus m(reference_params());
    const auto grid = make_xi_grid(m.params().delta);
    CHECK(growth_comparison_check(m, grid) <= 0.0);
    // at xi = delta the inequality reduces algebraically to
    // delta <= ((1-alpha)/gamma) omega(delta), slack strictly positive
    const KnvParams& p = m.params();
    CHECK(p.delta < (1.0 - p.alpha) / p.gamma * m.omega_delta());
    // ratio tends to 1 as the K0 term fades
    const double xi = 1e10;
    const double lhs = std::pow(p.delta, p.alpha) * std::pow(xi, 1.0 - p.alpha);
    const double rhs = (1.0 - p.alpha) / p.gamma * m.omega(xi);
    CHECK(lhs / rhs > 0.9);
    CHECK(lhs / rhs < 1.0);
}

TEST_CASE("doubling deficit stays positive and approaches the power-law limit") {
    const KnvModulus m(reference_params());
    const KnvParams& p = m.params();
    const double limit = 2.0 - std::pow(2.0, 1.0 - p.alpha);
    const double deficit = doubling_deficit(m, make_xi_grid(p.delta));
    CHECK(deficit > 0.0);
    CHECK(deficit >= limit - 1e-12);
    // far out, omega is nearly pure power law and the deficit sits just above
    const double xi = 1e9;
    const double local = 2.0 - m.omega(2.0 * xi) / m.omega(xi);
    CHECK(local == doctest::Approx(limit).epsilon(1e-3));
    CHECK(local >= limit);

    // a larger alpha keeps more of the doubling gain
    KnvParams q = reference_params();
    q.alpha = 0.7;
    const KnvModulus m2(q);
    CHECK(doubling_deficit(m2, make_xi_grid(q.delta)) > deficit);
}

TEST_CASE("invalid arguments are rejected") {
    const KnvModulus m(reference_params());
    CHECK_THROWS_AS((void)riesz_modulus(m, -1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)dissipation_functional(m, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)dissipation_functional(m, 0.01, 0.75, 1e-10),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)find_admissible(0.6, CertificateConstants{}),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)make_xi_grid(0.0), std::invalid_argument);
}
