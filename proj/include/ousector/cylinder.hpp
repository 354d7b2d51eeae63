#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>

#include <Eigen/Dense>

#include "ousector/errors.hpp"

namespace ousector {

using Point = Eigen::VectorXd;
using Cx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

enum class Growth { bounded, polynomial };

/// Smooth real- or complex-valued test function with value, gradient and
/// Hessian oracles. Derivative oracles are cross-validated against
/// centered finite differences at construction (20 random points, 1e-6
/// relative); transcription errors in hand-written test functions are
/// caught immediately. Gradient and Hessian may be omitted for
/// functions only ever evaluated pointwise (e.g. clamped profiles fed
/// to the transition semigroup).
class CylinderFunction {
public:
    using ValueFn = std::function<Cx(const Point&)>;
    using GradientFn = std::function<CVector(const Point&)>;
    using HessianFn = std::function<CMatrix(const Point&)>;

    CylinderFunction(int dim, ValueFn value, GradientFn gradient,
                     HessianFn hessian, bool real_valued, Growth growth,
                     std::uint64_t validation_seed = 0x636f6e73ULL);

    int dim() const { return dim_; }
    bool is_real() const { return real_; }
    Growth growth() const { return growth_; }
    bool has_gradient() const { return static_cast<bool>(gradient_); }
    bool has_hessian() const { return static_cast<bool>(hessian_); }

    Cx value(const Point& x) const { return value_(x); }
    CVector gradient(const Point& x) const;
    CMatrix hessian(const Point& x) const;

    double value_r(const Point& x) const;
    Eigen::VectorXd gradient_r(const Point& x) const;
    Eigen::MatrixXd hessian_r(const Point& x) const;

private:
    int dim_;
    bool real_;
    Growth growth_;
    ValueFn value_;
    GradientFn gradient_;
    HessianFn hessian_;
};

// Built-in families; closed-form Gaussian integrals exist for all of
// them, which is what makes them usable as oracles.

/// f(x) = <x, b> + c.
CylinderFunction linear_fn(const Eigen::VectorXd& b, double c = 0.0);

/// f(x) = x^T C x / 2 + <b, x> + c with C symmetric.
CylinderFunction quadratic_fn(const Eigen::MatrixXd& C, const Eigen::VectorXd& b,
                              double c = 0.0);

/// f(x) = cos(<x, b> + phase); bounded.
CylinderFunction cos_fn(const Eigen::VectorXd& b, double phase = 0.0);

/// f(x) = sin(<x, b> + phase); bounded.
CylinderFunction sin_fn(const Eigen::VectorXd& b, double phase = 0.0);

/// f(x) = s * tanh(<x, b>); bounded.
CylinderFunction tanh_fn(const Eigen::VectorXd& b, double s = 1.0);

/// f(x) = clamp(<x, b> + c, 0, 1); value-only (not differentiable).
CylinderFunction clamp01_fn(const Eigen::VectorXd& b, double c = 0.0);

/// Random complex quadratic f(x) = c0 + <a, x> + x^T C x / 2 with
/// complex coefficients drawn from the seeded stream; |c0| is kept away
/// from zero so the dual function's negative powers stay tame.
CylinderFunction random_complex_quadratic(int dim, std::uint64_t seed);

/// Random real member of the built-in family (linear, quadratic, or
/// cos/sin of a linear functional), bounded coefficients.
CylinderFunction random_real_cylinder(int dim, std::uint64_t seed);

} // namespace ousector
