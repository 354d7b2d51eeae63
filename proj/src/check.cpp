#include "ousector/check.hpp"

#include <algorithm>
#include <cmath>

namespace ousector {

CheckReport identity_check(std::string name, double observed, double expected,
                           double tol) {
    CheckReport r;
    r.name = std::move(name);
    r.kind = "identity";
    r.observed = observed;
    r.expected = expected;
    const double scale = std::max({1.0, std::abs(observed), std::abs(expected)});
    r.residual = std::abs(observed - expected) / scale;
    r.tolerance = tol;
    r.passed = std::isfinite(r.residual) && r.residual <= tol;
    return r;
}

CheckReport margin_check(std::string name, double margin, double slack) {
    CheckReport r;
    r.name = std::move(name);
    r.kind = "inequality";
    r.margin = margin;
    r.tolerance = slack;
    r.passed = std::isfinite(margin) && margin >= -slack;
    return r;
}

CheckReport statistical_check(std::string name, double difference,
                              double std_error, std::int64_t n,
                              std::uint64_t seed, double sigma) {
    CheckReport r;
    r.name = std::move(name);
    r.kind = "statistical";
    r.observed = difference;
    r.std_error = std_error;
    r.n_samples = n;
    r.seed = seed;
    r.tolerance = sigma * std_error + 1e-12;
    r.passed = std::isfinite(difference) && std::abs(difference) <= r.tolerance;
    return r;
}

CheckReport info_check(std::string name, std::string note) {
    CheckReport r;
    r.name = std::move(name);
    r.kind = "info";
    r.note = std::move(note);
    r.passed = true;
    return r;
}

bool all_passed(const std::vector<CheckReport>& checks) {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckReport& c) { return c.passed; });
}

} // namespace ousector
