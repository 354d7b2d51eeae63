#pragma once

#include "ousector/config.hpp"
#include "ousector/report.hpp"
#include "ousector/weight.hpp"

namespace ousector {

/// Model and weight described by a config.
OuModel model_from_config(const ExperimentConfig& cfg);
WeightFunction weight_from_config(const ExperimentConfig& cfg, int dim);

/// Executes the selected suites in dependency order. Failed checks are
/// recorded, never fatal; numerical errors inside a suite become failed
/// checks carrying the error text.
RunReport run(const ExperimentConfig& cfg);

} // namespace ousector
