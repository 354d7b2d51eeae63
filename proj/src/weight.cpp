#include "ousector/weight.hpp"

#include <cmath>
#include <sstream>

#include "ousector/rng.hpp"

namespace ousector {

WeightFunction::WeightFunction(int dim, ValueFn value, GradientFn gradient,
                               ConvexityCertificate cert,
                               std::optional<Eigen::MatrixXd> quadratic_form,
                               double min_value, std::uint64_t validation_seed)
    : dim_(dim),
      value_(std::move(value)),
      grad_(std::move(gradient)),
      cert_(cert),
      quad_(std::move(quadratic_form)),
      min_value_(min_value) {
    if (dim_ <= 0) throw DimensionError("WeightFunction: dim must be positive");
    if (!value_ || !grad_) {
        throw ValidationError("WeightFunction: value and gradient oracles required");
    }
    if (quad_ && (quad_->rows() != dim_ || quad_->cols() != dim_)) {
        throw DimensionError("WeightFunction: quadratic form has wrong dimension");
    }

    NormalStream ns(derive_seed(validation_seed, 0x636f6e76ULL));
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::VectorXd x(dim_), y(dim_);
        for (int i = 0; i < dim_; ++i) {
            x(i) = ns.next();
            y(i) = ns.next();
        }
        const double mid = value_(0.5 * (x + y));
        const double avg = 0.5 * (value_(x) + value_(y));
        if (!(mid <= avg + 1e-10)) {
            std::ostringstream os;
            os << "WeightFunction: midpoint convexity violated by " << mid - avg;
            throw ValidationError(os.str());
        }
    }
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXd x(dim_);
        for (int i = 0; i < dim_; ++i) x(i) = ns.next();
        const Eigen::VectorXd g = grad_(x);
        Eigen::VectorXd fd(dim_);
        const double h = 1e-5;
        for (int i = 0; i < dim_; ++i) {
            Eigen::VectorXd xp = x, xm = x;
            xp(i) += h;
            xm(i) -= h;
            fd(i) = (value_(xp) - value_(xm)) / (2.0 * h);
        }
        if (!((fd - g).norm() <= 1e-6 * std::max(1.0, g.norm()))) {
            throw ValidationError(
                "WeightFunction: gradient oracle disagrees with finite differences");
        }
    }
}

WeightFunction WeightFunction::zero(int dim) {
    WeightFunction w(
        dim, [](const Eigen::VectorXd&) { return 0.0; },
        [dim](const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(dim).eval(); },
        ConvexityCertificate::quadratic_form, Eigen::MatrixXd::Zero(dim, dim), 0.0);
    w.zero_ = true;
    return w;
}

WeightFunction WeightFunction::quadratic(const Eigen::MatrixXd& M) {
    if (M.rows() != M.cols()) throw DimensionError("quadratic weight: M must be square");
    const Eigen::MatrixXd S = 0.5 * (M + M.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-12) {
        std::ostringstream os;
        os << "quadratic weight: M not positive semidefinite (min eigenvalue "
           << es.eigenvalues().minCoeff() << ")";
        throw DefinitenessError(os.str());
    }
    return WeightFunction(
        static_cast<int>(S.rows()),
        [S](const Eigen::VectorXd& x) { return x.dot(S * x); },
        [S](const Eigen::VectorXd& x) { return (2.0 * S * x).eval(); },
        ConvexityCertificate::quadratic_form, S, 0.0);
}

WeightFunction WeightFunction::log_cosh(const Eigen::VectorXd& b) {
    // log cosh written through |s| + log1p(e^{-2|s|}) so large arguments
    // do not overflow cosh.
    auto lc = [](double s) {
        const double a = std::abs(s);
        return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
    };
    return WeightFunction(
        static_cast<int>(b.size()),
        [b, lc](const Eigen::VectorXd& x) { return lc(b.dot(x)); },
        [b](const Eigen::VectorXd& x) { return (std::tanh(b.dot(x)) * b).eval(); },
        ConvexityCertificate::user_asserted, std::nullopt, 0.0);
}

} // namespace ousector
