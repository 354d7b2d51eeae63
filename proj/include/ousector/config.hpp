#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ousector/errors.hpp"

namespace ousector {

/// Declarative experiment description. The text format is INI-style:
/// `[section]` headers, `key = value` lines, `#`/`;` comments; matrix
/// and list values are JSON arrays. See README for the grammar.
struct ExperimentConfig {
    enum class Source { builtin, explicit_matrices, wiener };
    enum class WeightKind { none, quadratic, logcosh };

    Source source = Source::builtin;
    std::string builtin_name = "rotation";
    double alpha = 0.5;
    Eigen::MatrixXd A;
    Eigen::MatrixXd Q;
    int wiener_modes = 8;

    WeightKind weight = WeightKind::none;
    Eigen::MatrixXd weight_M;
    Eigen::VectorXd weight_b;

    std::vector<double> p_list{2.0};
    std::int64_t samples = 100000;
    std::uint64_t seed = 1;
    std::set<std::string> suites{"model"};
    int galerkin_degree = 2;
    int fov_resolution = 720;

    std::string out_dir = "reports";
    std::string format = "json";  // json | csv-tables | plot-data

    std::map<std::string, double> tolerances;

    /// Raw text the config was parsed from; hashed for report naming.
    std::string raw_text;
};

/// Parses and validates; on failure throws ConfigError whose message
/// lists every problem with its line or field.
ExperimentConfig parse_config(const std::string& text);

ExperimentConfig parse_config_file(const std::string& path);

/// Tolerance lookup with per-module defaults.
double tolerance_or(const ExperimentConfig& cfg, const std::string& key,
                    double fallback);

/// FNV-1a hash of the raw config text; stable across platforms, used to
/// name report files.
std::uint64_t config_hash(const ExperimentConfig& cfg);

} // namespace ousector
