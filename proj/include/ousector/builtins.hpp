#pragma once

#include <string>
#include <vector>

#include "ousector/model.hpp"

namespace ousector {

/// Named example systems used by the CLI and the verification suites.
///   selfadjoint1d   A = -1, Q = 2               (gamma = 0)
///   rotation        A = [[-1, a], [-a, -1]], Q = 2 Id   (gamma = |a|)
///   anisotropic2d   A = diag(-1, -3), Q = diag(2, 6)    (gamma = 0)
///   mixed3          3x3 nonnormal drift, coupled SPD Q  (gamma > 0)
OuModel builtin_model(const std::string& name, double alpha = 0.5);

std::vector<std::string> builtin_model_names();

} // namespace ousector
