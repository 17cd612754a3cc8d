#pragma once

#include "sqg/grid.hpp"

#include <string>

namespace sqg {

// Recipe for a mean-free initial field on an n x n grid.
//
// kind "single": amplitude * cos(k1 x1 + k2 x2). One of target_sup /
// target_grad may replace the amplitude; setting both is rejected since a
// single mode fixes their ratio.
//
// kind "random": trigonometric polynomial with modes |k|_inf <= modes and
// coefficients drawn once from a seeded generator. When both targets are set
// the spectral tilt is tuned so that sup and gradient-sup norms land on them
// (within 1%); the reachable ratio range depends on `modes` and infeasible
// targets are rejected with that range in the message. With no targets the
// field is scaled to `amplitude` in sup norm.
struct InitialDataSpec {
    std::string kind = "single";
    int k1 = 1;
    int k2 = 0;
    double amplitude = 1e-3;
    int modes = 3;
    double target_sup = 0.0;
    double target_grad = 0.0;
    unsigned long long seed = 1;
    int n = 128;
};

RealField generate_initial_data(const InitialDataSpec& spec);

} // namespace sqg
