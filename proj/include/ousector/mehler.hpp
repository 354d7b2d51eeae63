#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ousector/check.hpp"
#include "ousector/cylinder.hpp"
#include "ousector/model.hpp"

namespace ousector {

/// Gauss-Hermite rule for the physicists' weight e^{-s^2} (Golub-Welsch).
struct GaussHermite {
    Vector nodes;
    Vector weights;
    static GaussHermite compute(int n);
};

/// Gauss-Legendre rule on [a, b].
struct GaussLegendre {
    Vector nodes;
    Vector weights;
    static GaussLegendre compute(int n, double a = -1.0, double b = 1.0);
};

/// How Gaussian expectations are evaluated: tensor Gauss-Hermite up to
/// dimension 4, seeded Monte Carlo (with standard error) beyond.
struct QuadratureSpec {
    enum class Method { automatic, gauss_hermite, monte_carlo };
    Method method = Method::automatic;
    int gh_nodes = 20;
    std::int64_t mc_samples = 100000;
    std::uint64_t seed = 1;
};

struct MehlerResult {
    double value = 0.0;
    double std_error = 0.0;  // 0 for quadrature
    std::int64_t n_evals = 0;
    std::string method;
};

/// E[g(mean + Z)], Z ~ N(0, cov), by the rule the spec selects.
MehlerResult gaussian_expectation(const SpdMatrix& cov, const Vector& mean,
                                  const std::function<double(const Point&)>& g,
                                  const QuadratureSpec& quad);

/// The transition semigroup P(t)f(x) = E[f(e^{tA} x + Z)], Z ~ N(0, Q_t).
MehlerResult mehler_apply(const OuModel& m, const CylinderFunction& f, double t,
                          const Point& x, const QuadratureSpec& quad);

struct SemigroupCheckSpec {
    std::int64_t outer_samples = 2000;  // x-draws from mu_inf
    QuadratureSpec quad;
    std::uint64_t seed = 1;
};

/// Verifies on the built-in family, for each t in the grid:
/// positivity (f >= 0 => P(t)f >= 0), the sub-Markov property
/// (0 <= f <= 1 => 0 <= P(t)f <= 1), L^2 contraction against mu_inf,
/// and invariance of mu_inf.
std::vector<CheckReport> semigroup_properties_check(
    const OuModel& m, const std::vector<double>& t_grid,
    const SemigroupCheckSpec& spec);

/// Chapman-Kolmogorov: P(t+s)f(x) = P(t)P(s)f(x) at sampled points,
/// within combined quadrature error.
std::vector<CheckReport> chapman_kolmogorov_check(const OuModel& m,
                                                  const CylinderFunction& f,
                                                  double s, double t,
                                                  int points,
                                                  const QuadratureSpec& quad,
                                                  std::uint64_t seed);

} // namespace ousector
