#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "ousector/runner.hpp"

using namespace ousector;

namespace {

const char* kMinimalConfig =
    "[model]\n"
    "source = builtin\n"
    "name = rotation\n"
    "alpha = 0.5\n"
    "[run]\n"
    "p = [2]\n"
    "samples = 5000\n"
    "seed = 7\n"
    "suites = model\n";

} // namespace

TEST_CASE("minimal config parses with expected fields") {
    const ExperimentConfig cfg = parse_config(kMinimalConfig);
    CHECK(cfg.source == ExperimentConfig::Source::builtin);
    CHECK(cfg.builtin_name == "rotation");
    CHECK(cfg.alpha == 0.5);
    CHECK(cfg.p_list == std::vector<double>{2.0});
    CHECK(cfg.samples == 5000);
    CHECK(cfg.seed == 7);
    CHECK(cfg.suites.count("model") == 1);
}

TEST_CASE("p = 1 is rejected with a pointed message") {
    try {
        parse_config("[run]\np = [1.0]\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("p must exceed 1") != std::string::npos);
    }
}

TEST_CASE("explicit unstable drift is rejected naming the eigenvalue") {
    try {
        parse_config(
            "[model]\n"
            "source = explicit\n"
            "A = [[1.0, 0.0], [0.0, -1.0]]\n"
            "Q = [[1.0, 0.0], [0.0, 1.0]]\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("not stable") != std::string::npos);
        CHECK(msg.find("real part 1") != std::string::npos);
    }
}

TEST_CASE("errors are collected, with line numbers") {
    try {
        parse_config(
            "[model]\n"
            "sourze = builtin\n"
            "[run]\n"
            "p = [0.5]\n"
            "zamples = 10\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("3 problems") != std::string::npos);
        CHECK(msg.find("line 2") != std::string::npos);
        CHECK(msg.find("line 5") != std::string::npos);
    }
}

TEST_CASE("unknown suite and section are flagged") {
    CHECK_THROWS_AS(parse_config("[run]\nsuites = cake\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[dessert]\nkind = cake\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("orphan = 1\n"), ConfigError);
}

TEST_CASE("run on the model suite produces the advertised derived data") {
    const ExperimentConfig cfg = parse_config(kMinimalConfig);
    const RunReport rep = run(cfg);
    CHECK(rep.dim == 2);
    CHECK(rep.gamma == doctest::Approx(0.5).epsilon(1e-10));
    REQUIRE(rep.sectors.size() == 1);
    CHECK(rep.sectors[0].p == 2.0);
    CHECK(rep.sectors[0].c_theta == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(rep.passed);
    CHECK(rep.checks.size() >= 6);
    CHECK(rep.timing_ms.count("model") == 1);
}

TEST_CASE("reports are deterministic up to the timing block") {
    const ExperimentConfig cfg = parse_config(kMinimalConfig);
    auto j1 = report_to_json(run(cfg));
    auto j2 = report_to_json(run(cfg));
    j1.erase("timing");
    j2.erase("timing");
    CHECK(j1.dump() == j2.dump());
}

TEST_CASE("json report round-trips") {
    const ExperimentConfig cfg = parse_config(kMinimalConfig);
    const RunReport rep = run(cfg);
    auto j = report_to_json(rep);
    const RunReport back = report_from_json(j);
    auto j2 = report_to_json(back);
    CHECK(j.dump() == j2.dump());
}

TEST_CASE("emit writes append-only files plus an index") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "ousector_emit_test";
    fs::remove_all(dir);

    ExperimentConfig cfg = parse_config(kMinimalConfig);
    RunReport rep = run(cfg);

    const auto f1 = emit(rep, "json", dir.string());
    REQUIRE(f1.size() == 1);
    const auto f2 = emit(rep, "json", dir.string());
    REQUIRE(f2.size() == 1);
    CHECK(f1[0] != f2[0]);  // append-only: second run gets a new file
    CHECK(fs::exists(f1[0]));
    CHECK(fs::exists(f2[0]));
    CHECK(fs::exists(dir / "index.tsv"));

    std::ifstream idx(dir / "index.tsv");
    int lines = 0;
    std::string l;
    while (std::getline(idx, l)) ++lines;
    CHECK(lines == 2);

    const auto csv = emit(rep, "csv-tables", dir.string());
    REQUIRE(csv.size() == 1);
    std::ifstream c(csv[0]);
    int rows = 0;
    while (std::getline(c, l)) ++rows;
    CHECK(rows == static_cast<int>(rep.checks.size()) + 1);  // header + checks

    fs::remove_all(dir);
}

TEST_CASE("plot-data emits theta curves with the maximum at p = 2") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "ousector_plot_test";
    fs::remove_all(dir);

    for (double alpha : {0.0, 0.5, 1.0}) {
        std::string text = kMinimalConfig;
        text += "\n[model]\nalpha = " + std::to_string(alpha) +
                "\n[output]\nformat = plot-data\n";
        const RunReport rep = run(parse_config(text));
        const auto files = emit(rep, "plot-data", dir.string());
        REQUIRE(!files.empty());
        std::ifstream in(files[0]);
        std::string header;
        std::getline(in, header);
        CHECK(header == "p,theta_p,c_theta,gamma");
        double best_theta = -1.0, best_p = 0.0;
        std::string row;
        while (std::getline(in, row)) {
            const auto c1 = row.find(',');
            const auto c2 = row.find(',', c1 + 1);
            const double p = std::stod(row.substr(0, c1));
            const double theta = std::stod(row.substr(c1 + 1, c2 - c1 - 1));
            if (theta > best_theta) {
                best_theta = theta;
                best_p = p;
            }
        }
        CHECK(std::abs(best_p - 2.0) <= 0.051);
    }
    fs::remove_all(dir);
}

TEST_CASE("config hash is stable and content sensitive") {
    const ExperimentConfig a = parse_config(kMinimalConfig);
    const ExperimentConfig b = parse_config(kMinimalConfig);
    CHECK(config_hash(a) == config_hash(b));
    const ExperimentConfig c = parse_config(std::string(kMinimalConfig) + "# x\n");
    CHECK(config_hash(a) != config_hash(c));
}

TEST_CASE("tolerance overrides reach the lookup") {
    const ExperimentConfig cfg =
        parse_config("[tolerances]\ncoercivity = 1e-8\n");
    CHECK(tolerance_or(cfg, "coercivity", 1e-10) == 1e-8);
    CHECK(tolerance_or(cfg, "unset", 1e-10) == 1e-10);
}
