#include "sqg/config.hpp"

#include "sqg/errors.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace sqg {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt(const std::vector<double>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += fmt(v[i]);
    }
    return out;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value for " + key + ": '" + v + "'");
    }
}

int parse_int(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const int x = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("bad integer value for " + key + ": '" + v + "'");
    }
}

unsigned long long parse_u64(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const unsigned long long x = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("bad unsigned value for " + key + ": '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("bad boolean value for " + key + ": '" + v + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(key, trim(item)));
    if (out.empty()) throw ConfigError("empty list for " + key);
    return out;
}

} // namespace

KnvParams ExperimentConfig::knv_params() const {
    KnvParams p;
    p.delta = delta;
    p.gamma = gamma;
    p.r = r;
    p.alpha = alpha;
    p.s = solver.s;
    return p;
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;
    static const std::map<std::string, Setter> keys = {
        {"s", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.solver.s = parse_double(k, v);
         }},
        {"kappa", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.solver.kappa = parse_double(k, v);
             c.constants.kappa = c.solver.kappa;
         }},
        {"n", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.solver.n = parse_int(k, v);
         }},
        {"t_end", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.solver.t_end = parse_double(k, v);
         }},
        {"cfl", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.solver.cfl = parse_double(k, v);
         }},
        {"dt_max", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.solver.dt_max = parse_double(k, v);
         }},
        {"eps_floor", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.solver.eps_floor = parse_double(k, v);
         }},
        {"dealias", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.solver.dealias = parse_bool(k, v);
         }},
        {"sample_dt", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.solver.sample_dt = parse_double(k, v);
         }},
        {"moc_dt", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.solver.moc_dt = parse_double(k, v);
         }},
        {"snapshot_dt", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.snapshot_dt = parse_double(k, v);
         }},
        {"modulus", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             if (v != "knv" && v != "search")
                 throw ConfigError("bad value for " + k + ": '" + v + "'");
             c.modulus = v;
         }},
        {"delta", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.delta = parse_double(k, v);
         }},
        {"gamma", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.gamma = parse_double(k, v);
         }},
        {"r", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.r = parse_double(k, v);
         }},
        {"alpha", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.alpha = parse_double(k, v);
         }},
        {"A", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.constants.A = parse_double(k, v);
         }},
        {"C_diss", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.constants.C_diss = parse_double(k, v);
         }},
        {"C_prime", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.constants.C_prime = parse_double(k, v);
         }},
        {"budget", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.budget = parse_int(k, v);
         }},
        {"init_kind", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             if (v != "single" && v != "random")
                 throw ConfigError("bad value for " + k + ": '" + v + "'");
             c.init_kind = v;
         }},
        {"init_k1", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.init_k1 = parse_int(k, v);
         }},
        {"init_k2", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.init_k2 = parse_int(k, v);
         }},
        {"init_amplitude", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.init_amplitude = parse_double(k, v);
         }},
        {"init_modes", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.init_modes = parse_int(k, v);
         }},
        {"init_target_sup", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.init_target_sup = parse_double(k, v);
         }},
        {"init_target_grad", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.init_target_grad = parse_double(k, v);
         }},
        {"seed", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.seed = parse_u64(k, v);
         }},
        {"out_dir", [](ExperimentConfig& c, const std::string&, const std::string& v) {
             c.out_dir = v;
         }},
        {"resume", [](ExperimentConfig& c, const std::string&, const std::string& v) {
             c.resume = v;
         }},
        {"kc_s", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.kc_s = parse_list(k, v);
         }},
        {"kc_n", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.kc_n = parse_int(k, v);
         }},
        {"kc_form", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             if (v != "paper" && v != "standard" && v != "both")
                 throw ConfigError("bad value for " + k + ": '" + v + "'");
             c.kc_form = v;
         }},
        {"scan_deltas", [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.scan_deltas = parse_list(k, v);
         }},
        {"scan_gamma_fracs",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.scan_gamma_fracs = parse_list(k, v);
         }},
    };

    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = keys.find(key);
        if (it == keys.end())
            throw ConfigError("line " + std::to_string(lineno) + ": unknown config key '" +
                              key + "'");
        it->second(cfg, key, value);
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream out;
    out << "s = " << fmt(c.solver.s) << "\n";
    out << "kappa = " << fmt(c.solver.kappa) << "\n";
    out << "n = " << c.solver.n << "\n";
    out << "t_end = " << fmt(c.solver.t_end) << "\n";
    out << "cfl = " << fmt(c.solver.cfl) << "\n";
    out << "dt_max = " << fmt(c.solver.dt_max) << "\n";
    out << "eps_floor = " << fmt(c.solver.eps_floor) << "\n";
    out << "dealias = " << (c.solver.dealias ? "true" : "false") << "\n";
    out << "sample_dt = " << fmt(c.solver.sample_dt) << "\n";
    out << "moc_dt = " << fmt(c.solver.moc_dt) << "\n";
    out << "snapshot_dt = " << fmt(c.snapshot_dt) << "\n";
    out << "modulus = " << c.modulus << "\n";
    out << "delta = " << fmt(c.delta) << "\n";
    out << "gamma = " << fmt(c.gamma) << "\n";
    out << "r = " << fmt(c.r) << "\n";
    out << "alpha = " << fmt(c.alpha) << "\n";
    out << "A = " << fmt(c.constants.A) << "\n";
    out << "C_diss = " << fmt(c.constants.C_diss) << "\n";
    out << "C_prime = " << fmt(c.constants.C_prime) << "\n";
    out << "budget = " << c.budget << "\n";
    out << "init_kind = " << c.init_kind << "\n";
    out << "init_k1 = " << c.init_k1 << "\n";
    out << "init_k2 = " << c.init_k2 << "\n";
    out << "init_amplitude = " << fmt(c.init_amplitude) << "\n";
    out << "init_modes = " << c.init_modes << "\n";
    out << "init_target_sup = " << fmt(c.init_target_sup) << "\n";
    out << "init_target_grad = " << fmt(c.init_target_grad) << "\n";
    out << "seed = " << c.seed << "\n";
    out << "out_dir = " << c.out_dir << "\n";
    out << "resume = " << c.resume << "\n";
    out << "kc_s = " << fmt(c.kc_s) << "\n";
    out << "kc_n = " << c.kc_n << "\n";
    out << "kc_form = " << c.kc_form << "\n";
    out << "scan_deltas = " << fmt(c.scan_deltas) << "\n";
    out << "scan_gamma_fracs = " << fmt(c.scan_gamma_fracs) << "\n";
    return out.str();
}

} // namespace sqg
