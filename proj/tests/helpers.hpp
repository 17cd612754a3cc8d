#pragma once

#include "sqg/grid.hpp"

#include <cmath>
#include <random>

namespace sqg::testing {

// band-limited random real field with integer modes 1 <= |k|_inf <= kmax
inline RealField random_smooth_field(const Grid& g, int kmax, uint64_t seed,
                                     double amplitude = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    RealField f(g);
    for (int a1 = -kmax; a1 <= kmax; ++a1)
        for (int a2 = -kmax; a2 <= kmax; ++a2) {
            if (a1 == 0 && a2 == 0) continue;
            const double cr = unif(rng), ci = unif(rng);
            for (int i = 0; i < g.n; ++i)
                for (int j = 0; j < g.n; ++j) {
                    const double ph = a1 * g.x(i) + a2 * g.x(j);
                    f.at(i, j) += cr * std::cos(ph) + ci * std::sin(ph);
                }
        }
    double m = 0.0;
    for (double x : f.v) m = std::max(m, std::fabs(x));
    if (m > 0.0)
        for (double& x : f.v) x *= amplitude / m;
    return f;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

} // namespace sqg::testing
