#pragma once

#include "sqg/certificate.hpp"
#include "sqg/modulus.hpp"
#include "sqg/solver.hpp"

#include <string>
#include <vector>

namespace sqg {

// flat key = value experiment description; parse/serialize round-trip exactly
struct ExperimentConfig {
    SolverConfig solver;

    std::string modulus = "knv"; // "knv" (explicit parameters) or "search"
    double delta = 0.01;
    double gamma = 0.05;
    double r = 1.2;
    double alpha = 0.6;
    CertificateConstants constants; // kappa kept in sync with solver.kappa
    int budget = 40;

    std::string init_kind = "single"; // "single" or "random"
    int init_k1 = 1;
    int init_k2 = 0;
    double init_amplitude = 1e-3;
    int init_modes = 3;
    double init_target_sup = 0.0; // 0 = no norm targeting
    double init_target_grad = 0.0;
    unsigned long long seed = 1;

    std::string out_dir = ".";
    std::string resume; // snapshot path; empty = fresh start
    double snapshot_dt = 0.0;

    std::vector<double> kc_s = {0.25, 0.4, 0.5};
    int kc_n = 64;
    std::string kc_form = "paper"; // "paper", "standard", or "both"

    std::vector<double> scan_deltas = {0.1, 0.05, 0.025, 0.0125};
    std::vector<double> scan_gamma_fracs = {0.25, 0.5, 0.9};

    KnvParams knv_params() const; // delta/gamma/r/alpha with s = solver.s
};

ExperimentConfig parse_config(const std::string& text); // throws ConfigError
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& cfg); // canonical key order

} // namespace sqg
