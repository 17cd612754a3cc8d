#pragma once

#include <stdexcept>
#include <string>

namespace sqg {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QuadratureError : std::runtime_error {
    double achieved;
    QuadratureError(const std::string& what, double achieved_tol)
        : std::runtime_error(what + " (achieved error estimate " + std::to_string(achieved_tol) + ")"),
          achieved(achieved_tol) {}
};

struct BlowupError : std::runtime_error {
    double t;
    double sup_norm;
    BlowupError(double time, double sup)
        : std::runtime_error("solution blew up at t=" + std::to_string(time) +
                             ", sup=" + std::to_string(sup)),
          t(time), sup_norm(sup) {}
};

} // namespace sqg
