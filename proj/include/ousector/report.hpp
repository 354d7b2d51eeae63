#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ousector/check.hpp"
#include "ousector/config.hpp"
#include "ousector/model.hpp"

namespace ousector {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

/// Everything one run produced: the config echo, derived model
/// quantities, every CheckReport, and per-suite timings. Re-running
/// with the same config and seed reproduces all numbers bit-for-bit;
/// only the timing block varies.
struct RunReport {
    ExperimentConfig config;
    std::string version = kVersion;
    int schema_version = kReportSchemaVersion;

    int dim = 0;
    Eigen::MatrixXd q_inf;
    Eigen::MatrixXd drift_operator;  // B
    double gamma = 0.0;
    std::vector<SectorParams> sectors;
    double weighted_mass = 0.0;
    double weighted_mass_std_error = 0.0;

    std::vector<CheckReport> checks;
    std::vector<std::complex<double>> fov_boundary;

    std::map<std::string, double> timing_ms;
    bool passed = true;
};

nlohmann::ordered_json report_to_json(const RunReport& report);
RunReport report_from_json(const nlohmann::ordered_json& j);

/// Writes the report under `out_dir` in the requested format
/// ("json", "csv-tables", "plot-data"), using append-only files named
/// by the config hash, and records the run in out_dir/index.tsv.
/// Returns the paths written.
std::vector<std::string> emit(const RunReport& report, const std::string& format,
                              const std::string& out_dir);

} // namespace ousector
