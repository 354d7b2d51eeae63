#include "ousector/measure.hpp"

#include <cmath>
#include <sstream>

#include "ousector/rng.hpp"

namespace ousector {

GaussianSampler::GaussianSampler(const OuModel& m, std::uint64_t seed)
    : dim_(m.dim), seed_(seed), sqrt_cov_(spd_sqrt(m.Q_inf).get()) {}

Point GaussianSampler::operator()(std::int64_t index) const {
    NormalStream ns(derive_seed(seed_, static_cast<std::uint64_t>(index)));
    Vector z(dim_);
    for (int i = 0; i < dim_; ++i) z(i) = ns.next();
    return sqrt_cov_ * z;
}

std::vector<Point> sample_gaussian(const OuModel& m, std::int64_t n,
                                   std::uint64_t seed) {
    if (n < 1) throw DomainError("sample_gaussian: n must be >= 1");
    GaussianSampler sampler(m, seed);
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) out.push_back(sampler(i));
    return out;
}

McEstimate integrate_nu(const WeightedMeasure& w,
                        const std::function<double(const Point&)>& g,
                        std::int64_t n, std::uint64_t seed) {
    if (n < 1) throw DomainError("integrate_nu: n must be >= 1");
    GaussianSampler sampler(w.model, seed);
    double sum = 0.0, sumsq = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        const Point x = sampler(i);
        const double v = g(x) * w.U.density(x);
        if (!std::isfinite(v)) {
            std::ostringstream os;
            os << "integrate_nu: non-finite integrand at sample " << i << ", x = ["
               << x.transpose() << "]";
            throw EvaluationError(os.str());
        }
        sum += v;
        sumsq += v * v;
    }
    McEstimate e;
    e.mean = sum / static_cast<double>(n);
    const double var =
        std::max(0.0, sumsq / static_cast<double>(n) - e.mean * e.mean);
    e.std_error = n > 1 ? std::sqrt(var / static_cast<double>(n - 1)) : 0.0;
    e.n_samples = n;
    e.seed = seed;
    return e;
}

McAccumulator::McAccumulator(int components)
    : k_(components), sum_(components, 0.0),
      cross_(static_cast<std::size_t>(components) * components, 0.0) {}

void McAccumulator::add(const double* values) {
    for (int i = 0; i < k_; ++i) {
        sum_[i] += values[i];
        for (int j = 0; j <= i; ++j) {
            cross_[static_cast<std::size_t>(i) * k_ + j] += values[i] * values[j];
        }
    }
    ++n_;
}

double McAccumulator::mean(int i) const {
    return n_ > 0 ? sum_[i] / static_cast<double>(n_) : 0.0;
}

double McAccumulator::std_error(const std::vector<double>& grad) const {
    if (n_ < 2) return 0.0;
    const double n = static_cast<double>(n_);
    double var = 0.0;
    for (int i = 0; i < k_; ++i) {
        for (int j = 0; j < k_; ++j) {
            const std::size_t idx = i >= j
                ? static_cast<std::size_t>(i) * k_ + j
                : static_cast<std::size_t>(j) * k_ + i;
            const double cov = cross_[idx] / n - mean(i) * mean(j);
            var += grad[i] * grad[j] * cov;
        }
    }
    return std::sqrt(std::max(0.0, var) / (n - 1.0));
}

double McAccumulator::std_error(int i) const {
    std::vector<double> g(k_, 0.0);
    g[i] = 1.0;
    return std_error(g);
}

CheckReport check_ibp(const WeightedMeasure& w, const HGeometry& g,
                      const CylinderFunction& f, const Vector& h,
                      std::int64_t n, std::uint64_t seed, double sigma) {
    if (h.size() != w.model.dim) {
        throw DimensionError("check_ibp: direction h has wrong dimension");
    }
    GaussianSampler sampler(w.model, seed);
    const Vector qinf_inv_h = g.gram_inf_inv * h;

    // Components: lhs integrand, rhs integrand, difference.
    McAccumulator acc(3);
    for (std::int64_t i = 0; i < n; ++i) {
        const Point x = sampler(i);
        const double density = w.U.density(x);
        // [D_H f, h]_H = grad f . h  (the Q and Q^{-1} cancel).
        const double lhs = f.gradient_r(x).dot(h) * density;
        const double hhat = x.dot(qinf_inv_h);
        const double du_h = w.U.gradient(x).dot(h);
        const double rhs = f.value_r(x) * (hhat + du_h) * density;
        const double row[3] = {lhs, rhs, lhs - rhs};
        acc.add(row);
    }
    CheckReport r =
        statistical_check("ibp", acc.mean(2), acc.std_error(2), n, seed, sigma);
    r.observed = acc.mean(0);
    r.expected = acc.mean(1);
    r.residual = acc.mean(2);
    return r;
}

} // namespace ousector
