#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "ousector/runner.hpp"

namespace {

// Exit codes: 0 all checks passed, 1 at least one check failed,
// 2 usage or configuration problem.
constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;

struct CliOptions {
    std::string config_path;
    std::string out_dir;
    std::string format;
    std::int64_t samples = -1;
    std::int64_t seed = -1;
};

ousector::ExperimentConfig load_config(const CliOptions& opt,
                                       const std::string& suites) {
    ousector::ExperimentConfig cfg;
    if (!opt.config_path.empty()) {
        cfg = ousector::parse_config_file(opt.config_path);
    } else {
        cfg = ousector::parse_config("[run]\nsuites = model\n");
    }
    std::string text = cfg.raw_text;
    // CLI overrides become part of the config text so that the report
    // hash reflects what actually ran.
    std::string overrides = "\n# cli overrides\n[run]\n";
    bool any = false;
    if (opt.samples >= 0) {
        overrides += "samples = " + std::to_string(opt.samples) + "\n";
        any = true;
    }
    if (opt.seed >= 0) {
        overrides += "seed = " + std::to_string(opt.seed) + "\n";
        any = true;
    }
    overrides += "suites = " + suites + "\n";
    any = true;
    std::string out_section;
    if (!opt.out_dir.empty()) {
        out_section += "out = " + opt.out_dir + "\n";
    }
    if (!opt.format.empty()) {
        out_section += "format = " + opt.format + "\n";
    }
    if (!out_section.empty()) overrides += "[output]\n" + out_section;
    if (any) text += overrides;
    return ousector::parse_config(text);
}

int run_and_emit(const ousector::ExperimentConfig& cfg) {
    const ousector::RunReport report = ousector::run(cfg);
    const auto files = ousector::emit(report, cfg.format, cfg.out_dir);

    int failed = 0;
    for (const auto& c : report.checks) {
        if (!c.passed) {
            ++failed;
            std::cout << "FAIL [" << c.suite << "] " << c.name;
            if (!c.note.empty()) std::cout << "  (" << c.note << ")";
            std::cout << "\n";
        }
    }
    std::cout << report.checks.size() - failed << "/" << report.checks.size()
              << " checks passed";
    if (report.gamma > 0.0 || report.dim > 0) {
        std::cout << "  (dim " << report.dim << ", gamma " << report.gamma << ")";
    }
    std::cout << "\n";
    for (const auto& f : files) std::cout << "wrote " << f << "\n";
    return report.passed ? kExitPass : kExitCheckFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "ousector: sector-of-analyticity verification for nonsymmetric "
        "Ornstein-Uhlenbeck generators under weighted Gaussian measures"};
    app.require_subcommand(1);

    CliOptions opt;
    app.add_option("--config", opt.config_path, "experiment config file");
    app.add_option("--seed", opt.seed, "override the RNG seed");
    app.add_option("--samples", opt.samples, "override the Monte Carlo sample count");
    app.add_option("--out", opt.out_dir, "report output directory");
    app.add_option("--format", opt.format, "report format: json, csv-tables, plot-data");

    // Subcommand -> suite selection.
    app.add_subcommand("model", "geometry, drift-operator algebra, sector angles");
    app.add_subcommand("forms",
                       "Dirichlet-form identities, duality, transition semigroup, "
                       "integration by parts");
    app.add_subcommand("sector", "pointwise identities, numerical range, field of values");
    app.add_subcommand("wiener", "spectral truncation of the L^2(0,1) example");
    app.add_subcommand("all", "every suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    std::string suites;
    if (app.got_subcommand("model")) suites = "model";
    else if (app.got_subcommand("forms")) suites = "model, forms, ibp, mehler";
    else if (app.got_subcommand("sector")) suites = "model, sector";
    else if (app.got_subcommand("wiener")) suites = "wiener";
    else suites = "all";

    try {
        return run_and_emit(load_config(opt, suites));
    } catch (const ousector::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ousector::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ousector::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailure;
    }
}
