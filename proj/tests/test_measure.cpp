#include <doctest.h>

#include <cmath>

#include "ousector/builtins.hpp"
#include "ousector/generator.hpp"
#include "ousector/measure.hpp"
#include "support/oracles.hpp"

using namespace ousector;
using namespace ousector::testing;

namespace {

WeightedMeasure unweighted(const OuModel& m) {
    return WeightedMeasure{m, WeightFunction::zero(m.dim)};
}

} // namespace

TEST_CASE("sample covariance and mean match Q_inf within CLT tolerance") {
    const OuModel m = builtin_model("rotation", 0.7);
    const std::int64_t n = 1000000;
    const auto pts = sample_gaussian(m, n, 42);
    Vector mean = Vector::Zero(2);
    Matrix cov = Matrix::Zero(2, 2);
    for (const auto& x : pts) {
        mean += x;
        cov += x * x.transpose();
    }
    mean /= static_cast<double>(n);
    cov /= static_cast<double>(n);
    // Entrywise fourth-moment standard errors ~ sqrt(2) q_ij / sqrt(n).
    const double se = 2.0 / std::sqrt(static_cast<double>(n));
    CHECK((cov - m.Q_inf.get()).cwiseAbs().maxCoeff() <= 4.0 * se);
    CHECK(mean.cwiseAbs().maxCoeff() <= 4.0 * se);
}

TEST_CASE("fixed seed reproduces draws bit for bit") {
    const OuModel m = builtin_model("mixed3");
    const auto a = sample_gaussian(m, 3, 1234);
    const auto b = sample_gaussian(m, 3, 1234);
    for (int i = 0; i < 3; ++i) CHECK((a[i] - b[i]).cwiseAbs().maxCoeff() == 0.0);
    const auto c = sample_gaussian(m, 3, 1235);
    CHECK((a[0] - c[0]).cwiseAbs().maxCoeff() > 0.0);
    // Index i draw does not depend on how many samples were requested.
    GaussianSampler s(m, 1234);
    CHECK((s(2) - a[2]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("integrate_nu of 1 under U = 0 is exactly 1 +- 0") {
    const OuModel m = builtin_model("rotation", 0.5);
    const McEstimate e =
        integrate_nu(unweighted(m), [](const Point&) { return 1.0; }, 5000, 7);
    CHECK(e.mean == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(e.std_error == 0.0);
}

TEST_CASE("integrate_nu quadratic weight mass has a determinant oracle") {
    const OuModel m = builtin_model("rotation", 0.5);
    Matrix M(2, 2);
    M << 0.5, 0.1, 0.1, 0.8;
    const WeightedMeasure w{m, WeightFunction::quadratic(M)};
    const McEstimate e =
        integrate_nu(w, [](const Point&) { return 1.0; }, 200000, 11);
    const double oracle =
        1.0 / std::sqrt((Matrix::Identity(2, 2) + 2.0 * m.Q_inf.get() * M).determinant());
    CHECK(std::abs(e.mean - oracle) <= 3.0 * e.std_error);
}

TEST_CASE("integrate_nu second moment matches b^T Q_inf b") {
    const OuModel m = builtin_model("anisotropic2d");
    Vector b(2);
    b << 1.0, -0.5;
    const McEstimate e = integrate_nu(
        unweighted(m),
        [&b](const Point& x) { const double v = b.dot(x); return v * v; }, 200000, 13);
    CHECK(std::abs(e.mean - b.dot(m.Q_inf.get() * b)) <= 3.0 * e.std_error);
}

TEST_CASE("integrate_nu is linear on shared samples") {
    const OuModel m = builtin_model("mixed3");
    const WeightedMeasure w = unweighted(m);
    auto g1 = [](const Point& x) { return x(0) * x(0); };
    auto g2 = [](const Point& x) { return std::sin(x(1)); };
    const McEstimate e1 = integrate_nu(w, g1, 20000, 5);
    const McEstimate e2 = integrate_nu(w, g2, 20000, 5);
    const McEstimate e12 = integrate_nu(
        w, [&](const Point& x) { return 2.0 * g1(x) - 3.0 * g2(x); }, 20000, 5);
    CHECK(e12.mean == doctest::Approx(2.0 * e1.mean - 3.0 * e2.mean).epsilon(1e-13));
}

TEST_CASE("doubling the sample count shrinks the error like 1/sqrt(2)") {
    const OuModel m = builtin_model("rotation", 0.5);
    const WeightedMeasure w = unweighted(m);
    auto g = [](const Point& x) { return x(0) * x(0) * x(1) + std::cos(x(1)); };
    const McEstimate e1 = integrate_nu(w, g, 40000, 21);
    const McEstimate e2 = integrate_nu(w, g, 80000, 21);
    const double ratio = e2.std_error / e1.std_error;
    CHECK(ratio <= (1.0 / std::sqrt(2.0)) * 1.5);
    CHECK(ratio >= (1.0 / std::sqrt(2.0)) / 1.5);
}

TEST_CASE("non-finite integrand reports the offending point") {
    const OuModel m = builtin_model("rotation", 0.5);
    CHECK_THROWS_AS(integrate_nu(
                        unweighted(m),
                        [](const Point& x) { return std::sqrt(x(0) - 1e9); }, 100, 3),
                    EvaluationError);
}

TEST_CASE("weighted integration by parts with a Gaussian covariance oracle") {
    // U = 0, f = <x, b>, h = Q x*: both sides are Gaussian covariances.
    const OuModel m = builtin_model("rotation", 0.8);
    const HGeometry g = h_geometry(m);
    const WeightedMeasure w = unweighted(m);
    Vector b(2), xs(2);
    b << 0.7, -0.4;
    xs << 0.2, 1.1;
    const Vector h = m.Q.get() * xs;
    const CylinderFunction f = linear_fn(b, 0.0);
    const CheckReport r = check_ibp(w, g, f, h, 100000, 17);
    CHECK(r.passed);
    // lhs = grad f . h exactly; rhs estimates E[<x,b><x, Q_inf^{-1} h>].
    CHECK(r.observed == doctest::Approx(b.dot(h)).epsilon(1e-12));
}

TEST_CASE("ibp holds for drift directions h = B i* x* and both weights") {
    const OuModel m = builtin_model("mixed3");
    const HGeometry g = h_geometry(m);
    Vector xs(3), bw(3);
    xs << 0.5, -0.2, 0.9;
    bw << 0.6, 0.3, -0.2;
    const Vector h = g.B * (m.Q.get() * xs);
    int idx = 0;
    for (const WeightFunction& u :
         {WeightFunction::zero(3),
          WeightFunction::quadratic((0.4 * Matrix::Identity(3, 3)).eval()),
          WeightFunction::log_cosh(bw)}) {
        const WeightedMeasure w{m, u};
        const CylinderFunction f = random_real_cylinder(3, 100 + idx);
        const CheckReport r = check_ibp(w, g, f, h, 100000, 900 + idx);
        CHECK(r.passed);
        ++idx;
    }
}

TEST_CASE("ibp with constant f reduces to the zero-gradient special case") {
    const OuModel m = builtin_model("rotation", 0.3);
    const HGeometry g = h_geometry(m);
    const WeightedMeasure w{
        m, WeightFunction::quadratic((0.3 * Matrix::Identity(2, 2)).eval())};
    const CylinderFunction one =
        quadratic_fn(Matrix::Zero(2, 2), Vector::Zero(2), 1.0);
    Vector xs(2);
    xs << 1.0, 0.5;
    const CheckReport r = check_ibp(w, g, one, (m.Q.get() * xs).eval(), 50000, 23);
    CHECK(r.passed);
    CHECK(r.observed == doctest::Approx(0.0));  // lhs has zero gradient
}

TEST_CASE("mc accumulator delta-method errors match the plain estimator") {
    McAccumulator acc(2);
    NormalStream ns(99);
    for (int i = 0; i < 5000; ++i) {
        const double a = ns.next();
        const double row[2] = {a, 2.0 * a + ns.next()};
        acc.add(row);
    }
    // Single-component gradient reproduces the usual std error.
    const double se0 = acc.std_error(0);
    CHECK(se0 == doctest::Approx(1.0 / std::sqrt(5000.0)).epsilon(0.1));
    // Perfectly correlated difference has near-zero variance.
    const double se_diff = acc.std_error({2.0, -1.0});
    CHECK(se_diff <= se0);
}
