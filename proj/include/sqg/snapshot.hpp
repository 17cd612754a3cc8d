#pragma once

#include "sqg/grid.hpp"

#include <string>

namespace sqg {

// On-disk state capture: exact field bytes plus enough metadata to restart.
struct Snapshot {
    RealField theta;
    double s = 0.0;
    double kappa = 0.0;
    double t = 0.0;
};

void save_snapshot(const std::string& path, const RealField& theta, double s, double kappa,
                   double t);

Snapshot load_snapshot(const std::string& path);

} // namespace sqg
