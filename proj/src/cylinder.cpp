#include "ousector/cylinder.hpp"

#include <cmath>
#include <sstream>

#include "ousector/rng.hpp"

namespace ousector {

namespace {

constexpr double kFdStep = 1e-5;
constexpr double kFdTol = 1e-6;

double cnorm(const CVector& v) { return v.norm(); }

void validate_derivatives(int dim, const CylinderFunction::ValueFn& value,
                          const CylinderFunction::GradientFn& gradient,
                          const CylinderFunction::HessianFn& hessian,
                          std::uint64_t seed) {
    NormalStream ns(derive_seed(seed, 0x66640000ULL));
    for (int trial = 0; trial < 20; ++trial) {
        Point x(dim);
        for (int i = 0; i < dim; ++i) x(i) = ns.next();

        if (gradient) {
            const CVector g = gradient(x);
            CVector fd(dim);
            for (int i = 0; i < dim; ++i) {
                Point xp = x, xm = x;
                xp(i) += kFdStep;
                xm(i) -= kFdStep;
                fd(i) = (value(xp) - value(xm)) / (2.0 * kFdStep);
            }
            const double scale = std::max(1.0, cnorm(g));
            if (!(cnorm(fd - g) <= kFdTol * scale)) {
                std::ostringstream os;
                os << "CylinderFunction: gradient oracle disagrees with finite "
                      "differences (|fd - grad| = " << cnorm(fd - g) << ")";
                throw ValidationError(os.str());
            }
        }
        if (gradient && hessian) {
            const CMatrix h = hessian(x);
            CMatrix fd(dim, dim);
            for (int i = 0; i < dim; ++i) {
                Point xp = x, xm = x;
                xp(i) += kFdStep;
                xm(i) -= kFdStep;
                fd.col(i) = (gradient(xp) - gradient(xm)) / (2.0 * kFdStep);
            }
            const double scale = std::max(1.0, h.norm());
            if (!((fd - h).norm() <= kFdTol * scale)) {
                std::ostringstream os;
                os << "CylinderFunction: Hessian oracle disagrees with finite "
                      "differences (|fd - hess| = " << (fd - h).norm() << ")";
                throw ValidationError(os.str());
            }
        }
    }
}

} // namespace

CylinderFunction::CylinderFunction(int dim, ValueFn value, GradientFn gradient,
                                   HessianFn hessian, bool real_valued,
                                   Growth growth, std::uint64_t validation_seed)
    : dim_(dim),
      real_(real_valued),
      growth_(growth),
      value_(std::move(value)),
      gradient_(std::move(gradient)),
      hessian_(std::move(hessian)) {
    if (dim_ <= 0) throw DimensionError("CylinderFunction: dim must be positive");
    if (!value_) throw ValidationError("CylinderFunction: value oracle required");
    validate_derivatives(dim_, value_, gradient_, hessian_, validation_seed);
}

CVector CylinderFunction::gradient(const Point& x) const {
    if (!gradient_) throw EvaluationError("CylinderFunction: no gradient oracle");
    return gradient_(x);
}

CMatrix CylinderFunction::hessian(const Point& x) const {
    if (!hessian_) throw EvaluationError("CylinderFunction: no Hessian oracle");
    return hessian_(x);
}

double CylinderFunction::value_r(const Point& x) const { return value_(x).real(); }

Eigen::VectorXd CylinderFunction::gradient_r(const Point& x) const {
    return gradient(x).real();
}

Eigen::MatrixXd CylinderFunction::hessian_r(const Point& x) const {
    return hessian(x).real();
}

CylinderFunction linear_fn(const Eigen::VectorXd& b, double c) {
    const int n = static_cast<int>(b.size());
    return CylinderFunction(
        n, [b, c](const Point& x) { return Cx(b.dot(x) + c, 0.0); },
        [b](const Point&) { return b.cast<Cx>().eval(); },
        [n](const Point&) { return CMatrix::Zero(n, n).eval(); },
        /*real_valued=*/true, Growth::polynomial);
}

CylinderFunction quadratic_fn(const Eigen::MatrixXd& C, const Eigen::VectorXd& b,
                              double c) {
    if (C.rows() != C.cols() || C.rows() != b.size()) {
        throw DimensionError("quadratic_fn: C and b dimensions disagree");
    }
    const Eigen::MatrixXd S = 0.5 * (C + C.transpose());
    return CylinderFunction(
        static_cast<int>(b.size()),
        [S, b, c](const Point& x) { return Cx(0.5 * x.dot(S * x) + b.dot(x) + c, 0.0); },
        [S, b](const Point& x) { return (S * x + b).cast<Cx>().eval(); },
        [S](const Point&) { return S.cast<Cx>().eval(); },
        /*real_valued=*/true, Growth::polynomial);
}

CylinderFunction cos_fn(const Eigen::VectorXd& b, double phase) {
    return CylinderFunction(
        static_cast<int>(b.size()),
        [b, phase](const Point& x) { return Cx(std::cos(b.dot(x) + phase), 0.0); },
        [b, phase](const Point& x) {
            return (-std::sin(b.dot(x) + phase) * b).cast<Cx>().eval();
        },
        [b, phase](const Point& x) {
            return (-std::cos(b.dot(x) + phase) * (b * b.transpose())).cast<Cx>().eval();
        },
        /*real_valued=*/true, Growth::bounded);
}

CylinderFunction sin_fn(const Eigen::VectorXd& b, double phase) {
    return cos_fn(b, phase - 1.5707963267948966);
}

CylinderFunction tanh_fn(const Eigen::VectorXd& b, double s) {
    return CylinderFunction(
        static_cast<int>(b.size()),
        [b, s](const Point& x) { return Cx(s * std::tanh(b.dot(x)), 0.0); },
        [b, s](const Point& x) {
            const double t = std::tanh(b.dot(x));
            return (s * (1.0 - t * t) * b).cast<Cx>().eval();
        },
        [b, s](const Point& x) {
            const double t = std::tanh(b.dot(x));
            return (-2.0 * s * t * (1.0 - t * t) * (b * b.transpose())).cast<Cx>().eval();
        },
        /*real_valued=*/true, Growth::bounded);
}

CylinderFunction clamp01_fn(const Eigen::VectorXd& b, double c) {
    return CylinderFunction(
        static_cast<int>(b.size()),
        [b, c](const Point& x) {
            const double v = b.dot(x) + c;
            return Cx(v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v), 0.0);
        },
        nullptr, nullptr, /*real_valued=*/true, Growth::bounded);
}

CylinderFunction random_complex_quadratic(int dim, std::uint64_t seed) {
    NormalStream ns(derive_seed(seed, 0x7175616421ULL));
    const Cx c0(1.0 + 0.3 * ns.next(), 0.3 * ns.next());
    CVector a(dim);
    for (int i = 0; i < dim; ++i) a(i) = Cx(ns.next(), ns.next()) * 0.7;
    CMatrix C(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j <= i; ++j) {
            const Cx v = Cx(ns.next(), ns.next()) * 0.4;
            C(i, j) = v;
            C(j, i) = v;
        }
    }
    return CylinderFunction(
        dim,
        [c0, a, C](const Point& x) {
            const CVector xc = x.cast<Cx>();
            return c0 + (a.transpose() * xc)(0) + 0.5 * (xc.transpose() * (C * xc))(0);
        },
        [a, C](const Point& x) { return (C * x.cast<Cx>() + a).eval(); },
        [C](const Point&) { return C; },
        /*real_valued=*/false, Growth::polynomial, seed);
}

CylinderFunction random_real_cylinder(int dim, std::uint64_t seed) {
    NormalStream ns(derive_seed(seed, 0x7265616cULL));
    Eigen::VectorXd b(dim);
    for (int i = 0; i < dim; ++i) b(i) = ns.next();
    const int kind = static_cast<int>(SplitMix64(derive_seed(seed, 3)).next() % 3);
    switch (kind) {
        case 0:
            return linear_fn(b, ns.next());
        case 1: {
            Eigen::MatrixXd C(dim, dim);
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j <= i; ++j) C(i, j) = C(j, i) = 0.5 * ns.next();
            Eigen::VectorXd b2(dim);
            for (int i = 0; i < dim; ++i) b2(i) = ns.next();
            return quadratic_fn(C, b2, ns.next());
        }
        default:
            return cos_fn(b, ns.next());
    }
}

} // namespace ousector
