#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ousector/check.hpp"
#include "ousector/cylinder.hpp"
#include "ousector/model.hpp"
#include "ousector/weight.hpp"

namespace ousector {

/// Monte Carlo estimate with its standard error (sample std / sqrt(n)).
/// Reproducible: the same (seed, n) always gives the same numbers.
struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t n_samples = 0;
    std::uint64_t seed = 0;
};

/// Streaming N(0, Q_inf) sampler: draw i is a pure function of
/// (seed, i), so loops over it can be scheduled in any order or split
/// across threads without changing results.
class GaussianSampler {
public:
    GaussianSampler(const OuModel& m, std::uint64_t seed);

    Point operator()(std::int64_t index) const;

    int dim() const { return dim_; }
    std::uint64_t seed() const { return seed_; }

private:
    int dim_;
    std::uint64_t seed_;
    Matrix sqrt_cov_;
};

/// n i.i.d. draws from mu_inf = N(0, Q_inf).
std::vector<Point> sample_gaussian(const OuModel& m, std::int64_t n,
                                   std::uint64_t seed);

/// Estimates the unnormalized integral of g against nu = e^{-U} mu_inf.
/// Throws EvaluationError (naming the sample point) if g is non-finite
/// somewhere.
McEstimate integrate_nu(const WeightedMeasure& w,
                        const std::function<double(const Point&)>& g,
                        std::int64_t n, std::uint64_t seed);

/// Accumulates per-sample component vectors and exposes means together
/// with the covariance of the means; used for delta-method standard
/// errors of smooth functions of several correlated MC averages.
class McAccumulator {
public:
    explicit McAccumulator(int components);

    void add(const double* values);
    void add(const std::vector<double>& values) { add(values.data()); }

    std::int64_t count() const { return n_; }
    double mean(int i) const;
    /// Standard error of the scalar sum_i grad[i] * mean[i].
    double std_error(const std::vector<double>& grad) const;
    /// Standard error of component i alone.
    double std_error(int i) const;

private:
    int k_;
    std::int64_t n_ = 0;
    std::vector<double> sum_;
    std::vector<double> cross_;  // k x k sums of products
};

/// Weighted integration-by-parts check: with h in H and
/// hhat(x) = <x, Q_inf^{-1} h>,
///   int [D_H f, h]_H dnu = int f hhat dnu + int f [D_H U, h]_H dnu.
/// Both sides share one sample set; the difference must vanish within
/// 3 standard errors.
CheckReport check_ibp(const WeightedMeasure& w, const HGeometry& g,
                      const CylinderFunction& f, const Vector& h,
                      std::int64_t n, std::uint64_t seed, double sigma = 3.0);

} // namespace ousector
