#include "sqg/cli.hpp"

#include "sqg/certificate.hpp"
#include "sqg/config.hpp"
#include "sqg/cs_kernel.hpp"
#include "sqg/errors.hpp"
#include "sqg/fft.hpp"
#include "sqg/init_data.hpp"
#include "sqg/monitor.hpp"
#include "sqg/snapshot.hpp"
#include "sqg/solver.hpp"
#include "sqg/spectral_ops.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace sqg {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Every output starts with a version line and the effective config, so a run
// is reproducible from its own artifact.
class CsvFile {
public:
    CsvFile(const fs::path& path, const std::string& name, const ExperimentConfig& cfg) {
        out_.open(path);
        if (!out_) throw ConfigError("cannot open output file: " + path.string());
        out_ << "# sqg-csv " << name << " v1\n";
        std::istringstream ss(serialize_config(cfg));
        std::string line;
        while (std::getline(ss, line)) out_ << "# " << line << "\n";
    }

    std::ofstream& stream() { return out_; }

private:
    std::ofstream out_;
};

InitialDataSpec init_spec(const ExperimentConfig& cfg) {
    InitialDataSpec spec;
    spec.kind = cfg.init_kind;
    spec.k1 = cfg.init_k1;
    spec.k2 = cfg.init_k2;
    spec.amplitude = cfg.init_amplitude;
    spec.modes = cfg.init_modes;
    spec.target_sup = cfg.init_target_sup;
    spec.target_grad = cfg.init_target_grad;
    spec.seed = cfg.seed;
    spec.n = cfg.solver.n;
    return spec;
}

int run_simulate(ExperimentConfig cfg, double tol_override) {
    if (cfg.modulus != "knv")
        throw ConfigError("simulate needs explicit modulus parameters (modulus = knv)");
    fs::create_directories(cfg.out_dir);
    const fs::path out_dir(cfg.out_dir);

    RealField theta0;
    double t0 = 0.0;
    const bool resuming = !cfg.resume.empty();
    if (resuming) {
        Snapshot snap = load_snapshot(cfg.resume);
        if (snap.theta.grid.n != cfg.solver.n)
            throw ConfigError("snapshot grid n = " + std::to_string(snap.theta.grid.n) +
                              " does not match config n = " + std::to_string(cfg.solver.n));
        cfg.solver.s = snap.s;
        cfg.solver.kappa = snap.kappa;
        cfg.constants.kappa = snap.kappa;
        theta0 = std::move(snap.theta);
        t0 = snap.t;
    } else {
        theta0 = generate_initial_data(init_spec(cfg));
    }

    const KnvModulus modulus(cfg.knv_params());

    MonitorHooks hooks;
    // modulus tracking is opt-in via the moc cadence; a plain simulation of
    // data outside the smallness regime is not a failed run
    if (cfg.solver.moc_dt > 0.0) hooks.omega_mu = rescaled_modulus(modulus, theta0);
    if (tol_override > 0.0) hooks.moc_tol = tol_override;

    RealField last = theta0;
    double last_t = t0;
    long snap_written = resuming ? std::lround(t0 / std::max(cfg.snapshot_dt, 1e-300)) : -1;
    hooks.on_sample = [&](const RealField& f, double t) {
        last = f;
        last_t = t;
        if (cfg.snapshot_dt <= 0.0) return;
        const long idx = std::lround(t / cfg.snapshot_dt);
        if (std::fabs(t - idx * cfg.snapshot_dt) <= 1e-9 * std::max(1.0, t) &&
            idx > snap_written) {
            snap_written = idx;
            char name[40];
            std::snprintf(name, sizeof name, "snap_%06ld.bin", idx);
            save_snapshot((out_dir / name).string(), f, cfg.solver.s, cfg.solver.kappa, t);
        }
    };

    TrajectoryReport rep;
    if (resuming) {
        SpectralField th = forward_transform(theta0);
        if (cfg.solver.dealias) th = dealias(th);
        enforce_hermitian(th);
        rep = run_from(State{std::move(th), t0}, cfg.solver, hooks);
    } else {
        rep = run(theta0, cfg.solver, hooks);
    }

    save_snapshot((out_dir / "final.bin").string(), last, cfg.solver.s, cfg.solver.kappa,
                  last_t);

    const bool grad_all =
        std::all_of(rep.grad_ok.begin(), rep.grad_ok.end(), [](char c) { return c != 0; });
    const bool moc_all =
        std::all_of(rep.moc_ok.begin(), rep.moc_ok.end(), [](char c) { return c != 0; });
    const bool pass = !rep.blew_up && grad_all && moc_all;

    {
        CsvFile csv(out_dir / "trajectory.csv", "trajectory", cfg);
        auto& o = csv.stream();
        o << "# summary pass=" << (pass ? 1 : 0) << " blew_up=" << (rep.blew_up ? 1 : 0)
          << " samples=" << rep.times.size() << " events=" << rep.events.size()
          << " sup0=" << fmt(rep.sup0) << " grad0=" << fmt(rep.grad0)
          << " subsampled=" << (rep.subsampled ? 1 : 0) << "\n";
        o << "t,sup_norm,grad_sup,bkm,moc_slack,grad_ok,moc_ok\n";
        for (size_t i = 0; i < rep.times.size(); ++i)
            o << fmt(rep.times[i]) << "," << fmt(rep.sup_norms[i]) << ","
              << fmt(rep.grad_sups[i]) << "," << fmt(rep.bkm[i]) << ","
              << fmt(rep.moc_slack[i]) << "," << int(rep.grad_ok[i]) << ","
              << int(rep.moc_ok[i]) << "\n";
    }
    {
        CsvFile csv(out_dir / "events.csv", "events", cfg);
        auto& o = csv.stream();
        o << "# summary pass=" << ((rep.events.empty() && !rep.blew_up) ? 1 : 0)
          << " events=" << rep.events.size() << "\n";
        o << "t,x1,x2,y1,y2,separation,slack\n";
        for (const auto& ev : rep.events)
            o << fmt(ev.t) << "," << fmt(ev.x[0]) << "," << fmt(ev.x[1]) << ","
              << fmt(ev.y[0]) << "," << fmt(ev.y[1]) << "," << fmt(ev.separation) << ","
              << fmt(ev.slack) << "\n";
    }

    if (rep.blew_up) {
        std::cerr << "simulate: blow-up detected at t = " << fmt(rep.blowup_t)
                  << " (sup = " << fmt(rep.blowup_sup) << ")\n";
        return 3;
    }
    std::cout << "simulate: " << (pass ? "pass" : "FAIL") << " (" << rep.times.size()
              << " samples, " << rep.events.size() << " events)\n";
    return pass ? 0 : 1;
}

int run_certify(const ExperimentConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    const fs::path out_dir(cfg.out_dir);

    DominanceReport report;
    KnvParams used;
    bool found = false;
    int tried = 0;
    if (cfg.modulus == "search") {
        SearchResult sr = find_admissible(cfg.solver.s, cfg.constants, cfg.budget);
        report = std::move(sr.report);
        used = sr.params;
        found = sr.found;
        tried = sr.tried;
    } else {
        const KnvModulus m(cfg.knv_params());
        report = dominance_report(m, make_xi_grid(m.params().delta), cfg.constants);
        used = m.params();
        found = report.pass;
        tried = 1;
    }

    double c_s = std::numeric_limits<double>::quiet_NaN();
    try {
        c_s = smallness_constant(KnvModulus(used));
    } catch (const std::invalid_argument&) {
    }

    const double worst_xi =
        report.xi_grid.empty() ? 0.0 : report.xi_grid[report.worst_index];
    CsvFile csv(out_dir / "dominance.csv", "dominance", cfg);
    auto& o = csv.stream();
    o << "# summary pass=" << (found ? 1 : 0) << " delta=" << fmt(used.delta)
      << " gamma=" << fmt(used.gamma) << " r=" << fmt(used.r) << " alpha=" << fmt(used.alpha)
      << " c_s=" << fmt(c_s) << " worst_margin=" << fmt(report.worst_margin)
      << " worst_xi=" << fmt(worst_xi) << " tried=" << tried << "\n";
    o << "xi,convection,dissipation,margin\n";
    for (size_t i = 0; i < report.xi_grid.size(); ++i)
        o << fmt(report.xi_grid[i]) << "," << fmt(report.convection[i]) << ","
          << fmt(report.dissipation[i]) << "," << fmt(report.margin[i]) << "\n";

    std::cout << "certify: " << (found ? "pass" : "FAIL") << " (delta = " << fmt(used.delta)
              << ", gamma = " << fmt(used.gamma) << ", worst margin = "
              << fmt(report.worst_margin) << ", c_s = " << fmt(c_s) << ")\n";
    return found ? 0 : 1;
}

int run_kernel_check(const ExperimentConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    const fs::path out_dir(cfg.out_dir);

    std::vector<KernelForm> forms;
    if (cfg.kc_form == "paper")
        forms = {KernelForm::paper};
    else if (cfg.kc_form == "standard")
        forms = {KernelForm::standard};
    else
        forms = {KernelForm::paper, KernelForm::standard};

    struct Row {
        KernelForm form;
        double s, h, mass, marginal, residual, c;
        bool converged;
    };
    std::vector<Row> rows;
    bool pass = true;
    int gated = 0;
    for (const KernelForm form : forms) {
        for (const double s : cfg.kc_s) {
            const CsKernelParams params = make_cs_params(2, s, form);
            const RepresentationFit fit = estimate_representation_constant(s, form, cfg.kc_n);
            for (const double h : default_h_ladder(s)) {
                Row row;
                row.form = form;
                row.s = s;
                row.h = h;
                row.mass = cs_mass_deviation(h, params);
                row.marginal = kernel_marginal_check(s, h, 1e-8, form);
                row.residual = fit.residual;
                row.c = fit.C;
                row.converged = fit.converged;
                rows.push_back(row);
                if (form == KernelForm::paper) {
                    ++gated;
                    if (!(row.mass <= 1e-8 && row.marginal <= 1e-6 && fit.converged &&
                          fit.residual <= 1e-2))
                        pass = false;
                }
            }
        }
    }

    CsvFile csv(out_dir / "kernel-check.csv", "kernel-check", cfg);
    auto& o = csv.stream();
    o << "# summary pass=" << (pass ? 1 : 0) << " forms=" << cfg.kc_form
      << " gated_rows=" << gated << "\n";
    o << "s,h,norm_err,marginal_dev,rep_residual,fitted_C,converged\n";
    KernelForm current = KernelForm::paper;
    bool first = true;
    for (const Row& row : rows) {
        if (first || row.form != current) {
            o << "# form " << (row.form == KernelForm::paper ? "paper" : "standard") << "\n";
            current = row.form;
            first = false;
        }
        o << fmt(row.s) << "," << fmt(row.h) << "," << fmt(row.mass) << ","
          << fmt(row.marginal) << "," << fmt(row.residual) << "," << fmt(row.c) << ","
          << (row.converged ? 1 : 0) << "\n";
    }

    std::cout << "kernel-check: " << (pass ? "pass" : "FAIL") << " (" << gated
              << " gated rows)\n";
    return pass ? 0 : 1;
}

int run_moc_scan(const ExperimentConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    const fs::path out_dir(cfg.out_dir);
    const double s = cfg.solver.s;

    struct Row {
        double delta, gamma, margin;
        bool pass, valid;
    };
    std::vector<Row> rows;
    bool any = false;
    for (const double delta : cfg.scan_deltas) {
        const double bound = std::min(
            std::min(1.0 - cfg.r * std::pow(delta, cfg.r - 1.0), cfg.alpha),
            std::min(0.5 * (1.0 - cfg.alpha), std::pow(delta, 2.0 * s)));
        for (const double frac : cfg.scan_gamma_fracs) {
            Row row;
            row.delta = delta;
            row.gamma = frac * bound;
            row.margin = std::numeric_limits<double>::quiet_NaN();
            row.pass = false;
            KnvParams p;
            p.delta = delta;
            p.gamma = row.gamma;
            p.r = cfg.r;
            p.alpha = cfg.alpha;
            p.s = s;
            row.valid = validate_params(p).empty();
            if (row.valid) {
                const KnvModulus m(p);
                const DominanceReport dr =
                    dominance_report(m, make_xi_grid(delta), cfg.constants);
                row.margin = dr.worst_margin;
                row.pass = dr.pass;
                any = any || dr.pass;
            }
            rows.push_back(row);
        }
    }

    CsvFile csv(out_dir / "moc-scan.csv", "moc-scan", cfg);
    auto& o = csv.stream();
    o << "# summary pass=" << (any ? 1 : 0) << " rows=" << rows.size() << "\n";
    o << "delta,gamma,valid,pass,worst_margin\n";
    for (const Row& row : rows)
        o << fmt(row.delta) << "," << fmt(row.gamma) << "," << (row.valid ? 1 : 0) << ","
          << (row.pass ? 1 : 0) << "," << fmt(row.margin) << "\n";

    std::cout << "moc-scan: " << (any ? "pass" : "FAIL") << " (" << rows.size()
              << " parameter sets)\n";
    return any ? 0 : 1;
}

int run_report(const std::string& dir) {
    if (!fs::exists(dir)) {
        std::cout << "no runs found in " << dir << "\n";
        return 1;
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".csv")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    int found = 0, failed = 0;
    for (const auto& path : files) {
        std::ifstream in(path);
        if (!in) continue;
        std::string line, name, summary;
        bool pass = false, have_summary = false;
        while (std::getline(in, line)) {
            if (line.rfind("# sqg-csv ", 0) == 0) {
                std::istringstream ss(line.substr(10));
                ss >> name;
            } else if (line.rfind("# summary pass=", 0) == 0) {
                have_summary = true;
                pass = line.size() > 15 && line[15] == '1';
                summary = line.substr(2);
            }
            if (!line.empty() && line[0] != '#') break;
        }
        if (!have_summary) continue;
        ++found;
        if (!pass) ++failed;
        std::cout << path.filename().string() << ": " << (name.empty() ? "output" : name)
                  << " " << (pass ? "PASS" : "FAIL") << " (" << summary << ")\n";
    }
    if (found == 0) {
        std::cout << "no runs found in " << dir << "\n";
        return 1;
    }
    std::cout << found << " outputs, " << (found - failed) << " passing, " << failed
              << " failing\n";
    return failed == 0 ? 0 : 1;
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"simulator and certificate toolkit for the dissipative SQG equation"};
    app.fallthrough();

    std::string config_path;
    std::string out_override;
    std::string report_dir = ".";
    unsigned long long seed_override = 0;
    double tol_override = 0.0;
    app.add_option("--config", config_path, "configuration file (key = value lines)");
    auto* opt_seed = app.add_option("--seed", seed_override, "override the config seed");
    auto* opt_out = app.add_option("--out", out_override, "override the output directory");
    auto* opt_tol =
        app.add_option("--tol", tol_override, "override the breakthrough slack tolerance");

    auto* sim = app.add_subcommand("simulate", "run a monitored trajectory");
    auto* cert = app.add_subcommand("certify", "evaluate the dominance certificate");
    auto* kc = app.add_subcommand("kernel-check", "validate the kernel representation");
    auto* ms = app.add_subcommand("moc-scan", "scan modulus parameters for admissibility");
    auto* rp = app.add_subcommand("report", "summarize prior outputs in a directory");
    rp->add_option("dir", report_dir, "directory holding csv outputs");
    app.require_subcommand(1);

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("sqg");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        ExperimentConfig cfg =
            config_path.empty() ? ExperimentConfig{} : load_config(config_path);
        if (opt_seed->count() > 0) cfg.seed = seed_override;
        if (opt_out->count() > 0) cfg.out_dir = out_override;
        const double tol = opt_tol->count() > 0 ? tol_override : 0.0;

        if (sim->parsed()) return run_simulate(std::move(cfg), tol);
        if (cert->parsed()) return run_certify(cfg);
        if (kc->parsed()) return run_kernel_check(cfg);
        if (ms->parsed()) return run_moc_scan(cfg);
        if (rp->parsed()) return run_report(report_dir);
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid parameters: " << e.what() << "\n";
        return 2;
    } catch (const BlowupError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const QuadratureError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}

} // namespace sqg
