#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace ousector {

/// Outcome of one verification: an identity residual, an inequality
/// margin, or a statistical comparison with its Monte Carlo error.
struct CheckReport {
    std::string suite;
    std::string name;
    std::string kind;  // "identity" | "inequality" | "statistical" | "info"
    bool passed = true;

    double observed = std::numeric_limits<double>::quiet_NaN();
    double expected = std::numeric_limits<double>::quiet_NaN();
    double residual = std::numeric_limits<double>::quiet_NaN();
    double margin = std::numeric_limits<double>::quiet_NaN();
    double tolerance = std::numeric_limits<double>::quiet_NaN();
    double std_error = std::numeric_limits<double>::quiet_NaN();

    std::int64_t n_samples = 0;
    std::uint64_t seed = 0;
    std::string note;
};

/// |observed - expected| <= tol * max(1, |observed|, |expected|).
CheckReport identity_check(std::string name, double observed, double expected,
                           double tol);

/// margin >= -slack (slack usually 3 std errors).
CheckReport margin_check(std::string name, double margin, double slack);

/// Statistical equality: |difference| <= sigma * std_error (+ tiny
/// absolute floor so exact-zero cases do not flicker).
CheckReport statistical_check(std::string name, double difference,
                              double std_error, std::int64_t n,
                              std::uint64_t seed, double sigma = 3.0);

/// Informational entry; always passes.
CheckReport info_check(std::string name, std::string note);

bool all_passed(const std::vector<CheckReport>& checks);

} // namespace ousector
