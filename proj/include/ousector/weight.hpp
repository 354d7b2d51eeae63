#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include <Eigen/Dense>

#include "ousector/errors.hpp"
#include "ousector/model.hpp"

namespace ousector {

enum class ConvexityCertificate { quadratic_form, user_asserted };

/// Convex weight U with value and gradient oracles. Construction runs a
/// midpoint-convexity spot check on 100 random pairs and validates the
/// gradient against finite differences.
class WeightFunction {
public:
    using ValueFn = std::function<double(const Eigen::VectorXd&)>;
    using GradientFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

    WeightFunction(int dim, ValueFn value, GradientFn gradient,
                   ConvexityCertificate cert,
                   std::optional<Eigen::MatrixXd> quadratic_form,
                   double min_value,
                   std::uint64_t validation_seed = 0x776569676874ULL);

    static WeightFunction zero(int dim);
    /// U(x) = x^T M x with M positive semidefinite.
    static WeightFunction quadratic(const Eigen::MatrixXd& M);
    /// U(x) = log cosh(<x, b>); convex, non-quadratic.
    static WeightFunction log_cosh(const Eigen::VectorXd& b);

    int dim() const { return dim_; }
    double value(const Eigen::VectorXd& x) const { return value_(x); }
    Eigen::VectorXd gradient(const Eigen::VectorXd& x) const { return grad_(x); }
    double density(const Eigen::VectorXd& x) const { return std::exp(-value_(x)); }

    ConvexityCertificate certificate() const { return cert_; }
    const std::optional<Eigen::MatrixXd>& quadratic_form() const { return quad_; }
    double min_value() const { return min_value_; }
    bool is_zero() const { return zero_; }

private:
    int dim_;
    ValueFn value_;
    GradientFn grad_;
    ConvexityCertificate cert_;
    std::optional<Eigen::MatrixXd> quad_;
    double min_value_;
    bool zero_ = false;
};

/// The weighted measure nu = e^{-U} mu_inf, kept unnormalized; the
/// normalizing mass shows up only in reports.
struct WeightedMeasure {
    OuModel model;
    WeightFunction U;
};

} // namespace ousector
