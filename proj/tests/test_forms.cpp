#include <doctest.h>

#include <cmath>

#include "ousector/builtins.hpp"
#include "ousector/forms.hpp"
#include "ousector/rng.hpp"

using namespace ousector;

namespace {

struct Setup {
    OuModel m;
    HGeometry g;
    WeightedMeasure w;
};

Setup make_setup(const std::string& name, double alpha, bool weighted) {
    OuModel m = builtin_model(name, alpha);
    HGeometry g = h_geometry(m);
    WeightFunction u = weighted
        ? WeightFunction::quadratic((0.4 * Matrix::Identity(m.dim, m.dim)).eval())
        : WeightFunction::zero(m.dim);
    return Setup{m, g, WeightedMeasure{std::move(m), std::move(u)}};
}

} // namespace

TEST_CASE("dirichlet form of a linear function against itself") {
    // E(u, u) = (1/2) b^T Q b * mass for u = <x, b>.
    const Setup s = make_setup("rotation", 0.7, false);
    Vector b(2);
    b << 0.8, -0.5;
    const CylinderFunction u = linear_fn(b, 0.0);
    const FormValue e = dirichlet_form(s.g, s.w, u, u, false, 50000, 5);
    CHECK(e.std_error == doctest::Approx(0.0));  // integrand constant under U = 0
    CHECK(e.value ==
          doctest::Approx(0.5 * b.dot(s.m.Q.get() * b)).epsilon(1e-12));
}

TEST_CASE("form of a constant function vanishes identically") {
    const Setup s = make_setup("rotation", 0.4, true);
    const CylinderFunction c = quadratic_fn(Matrix::Zero(2, 2), Vector::Zero(2), 3.0);
    const FormValue e = dirichlet_form(s.g, s.w, c, c, false, 1000, 9);
    CHECK(e.value == 0.0);
    CHECK(e.std_error == 0.0);
}

TEST_CASE("transpose identity E(u,v) = E~(v,u) exactly on shared samples") {
    const Setup s = make_setup("mixed3", 0.0, true);
    const CylinderFunction u = random_real_cylinder(3, 71);
    const CylinderFunction v = random_real_cylinder(3, 72);
    const FormValue lhs = dirichlet_form(s.g, s.w, u, v, false, 20000, 33);
    const FormValue rhs = dirichlet_form(s.g, s.w, v, u, true, 20000, 33);
    CHECK(lhs.value == doctest::Approx(rhs.value).epsilon(1e-11));
}

TEST_CASE("pointwise coercivity holds for every sample and test function") {
    for (int trial = 0; trial < 5; ++trial) {
        const Setup s = make_setup(trial % 2 ? "rotation" : "mixed3", 1.1, trial % 2);
        const CylinderFunction u =
            random_real_cylinder(s.m.dim, 4000 + trial);
        const CheckReport r = check_coercivity(s.g, s.w, u, 20000, 600 + trial);
        CAPTURE(r.residual);
        CHECK(r.passed);
    }
}

TEST_CASE("coercivity for a linear function is the constant identity") {
    const Setup s = make_setup("rotation", 0.5, false);
    Vector b(2);
    b << 1.0, 0.4;
    const CheckReport r = check_coercivity(s.g, s.w, linear_fn(b, 0.0), 1000, 3);
    CHECK(r.passed);
    CHECK(r.residual <= 1e-14);
}

TEST_CASE("sector condition holds, including the equality-flavoured u = v case") {
    const Setup s = make_setup("rotation", 1.3, true);
    const CylinderFunction u = random_real_cylinder(2, 81);
    const CylinderFunction v = random_real_cylinder(2, 82);
    CHECK(check_sector_condition(s.g, s.w, u, v, 50000, 7).passed);
    CHECK(check_sector_condition(s.g, s.w, u, u, 50000, 8).passed);
}

TEST_CASE("sector condition with orthogonal constant gradients") {
    // b1^T Q b2 = 0 makes the symmetric part vanish; only the
    // antisymmetric part of B contributes, and the bound still holds.
    const Setup s = make_setup("rotation", 0.9, false);
    Vector b1(2), b2(2);
    b1 << 1.0, 0.0;
    b2 << 0.0, 1.0;
    REQUIRE(std::abs(b1.dot(s.m.Q.get() * b2)) <= 1e-14);
    const CylinderFunction u = linear_fn(b1, 0.0);
    const CylinderFunction v = linear_fn(b2, 0.0);
    const FormValue e = dirichlet_form(s.g, s.w, u, v, false, 2000, 4);
    CHECK(std::abs(e.value) > 0.0);  // antisymmetric part alone
    CHECK(check_sector_condition(s.g, s.w, u, v, 20000, 4).passed);
}

TEST_CASE("sector condition with a constant v is the degenerate 0 <= 0") {
    const Setup s = make_setup("rotation", 0.5, false);
    const CylinderFunction u = random_real_cylinder(2, 91);
    const CylinderFunction c = quadratic_fn(Matrix::Zero(2, 2), Vector::Zero(2), 2.0);
    const CheckReport r = check_sector_condition(s.g, s.w, u, c, 5000, 5);
    CHECK(r.passed);
    CHECK(r.margin == doctest::Approx(0.0));
}

TEST_CASE("generator-form duality with gaussian closed forms for linear pairs") {
    // U = 0, u = <x,a>, v = <x,b>: E(u,v) = -(B Q a) . b (constant), and
    // -int (L u) v dmu = E[<A x, a> <x, b>] with Gaussian moments.
    const Setup s = make_setup("rotation", 0.8, false);
    Vector a(2), b(2);
    a << 0.9, -0.1;
    b << 0.3, 0.7;
    const FormValue e =
        dirichlet_form(s.g, s.w, linear_fn(a, 0.0), linear_fn(b, 0.0), false, 200000, 6);
    const double closed = -(s.g.B * s.m.Q.get() * a).dot(b);
    CHECK(e.value == doctest::Approx(closed).epsilon(1e-12));
    const double gaussian_side = -(s.m.A.get() * s.m.Q_inf.get() * b).dot(a);
    CHECK(closed == doctest::Approx(gaussian_side).epsilon(1e-10));
    const auto checks = check_generator_duality(s.g, s.w, linear_fn(a, 0.0),
                                                linear_fn(b, 0.0), false, 200000, 6);
    CHECK(checks.front().passed);
}

TEST_CASE("generator-form duality for quadratics under both weights") {
    for (bool weighted : {false, true}) {
        const Setup s = make_setup("mixed3", 0.0, weighted);
        const CylinderFunction u = random_real_cylinder(3, 301);
        const CylinderFunction v = random_real_cylinder(3, 302);
        const auto checks = check_generator_duality(s.g, s.w, u, v, true, 200000, 15);
        for (const auto& c : checks) {
            CAPTURE(c.name);
            CAPTURE(c.observed);
            CAPTURE(c.std_error);
            CHECK(c.passed);
        }
    }
}

TEST_CASE("duality against v = 1 is the invariance identity") {
    const Setup s = make_setup("rotation", 0.6, false);
    const CylinderFunction u = random_real_cylinder(2, 303);
    const CylinderFunction one = quadratic_fn(Matrix::Zero(2, 2), Vector::Zero(2), 1.0);
    const auto checks = check_generator_duality(s.g, s.w, u, one, false, 200000, 16);
    CHECK(checks.front().passed);
}

TEST_CASE("dirichlet operator inequality") {
    const Setup s = make_setup("rotation", 1.0, true);
    {
        // u <= -1 < 1 everywhere: empty excess set, estimate exactly 0.
        Vector b(2);
        b << 0.5, 0.5;
        const CylinderFunction u = [&] {
            return CylinderFunction(
                2, [b](const Point& x) { return Cx(std::sin(b.dot(x)) - 2.0, 0.0); },
                [b](const Point& x) {
                    return (std::cos(b.dot(x)) * b).cast<Cx>().eval();
                },
                nullptr, true, Growth::bounded);
        }();
        const CheckReport r = check_dirichlet_operator(s.g, s.w, u, 20000, 21);
        CHECK(r.passed);
        CHECK(r.observed == 0.0);
    }
    {
        // u = 2 tanh(<x,b>) exceeds 1 on a set of positive measure.
        Vector b(2);
        b << 1.0, -0.3;
        const CheckReport r =
            check_dirichlet_operator(s.g, s.w, tanh_fn(b, 2.0), 100000, 22);
        CHECK(r.passed);
        CHECK(r.observed < 0.0);
        CHECK(r.observed + 3.0 * r.std_error < 0.0);  // strictly negative
    }
    {
        Vector b(2);
        b << 0.8, 0.6;
        const CheckReport r =
            check_dirichlet_operator(s.g, s.w, linear_fn(b, 0.0), 100000, 23);
        CHECK(r.passed);
        CHECK(r.observed < 0.0);
    }
}

TEST_CASE("symmetric part identity: E + E~ equals the gradient form") {
    const Setup s = make_setup("mixed3", 0.0, true);
    const CylinderFunction u = random_real_cylinder(3, 311);
    const CylinderFunction v = random_real_cylinder(3, 312);
    const FormValue e = dirichlet_form(s.g, s.w, u, v, false, 30000, 41);
    const FormValue ed = dirichlet_form(s.g, s.w, u, v, true, 30000, 41);
    // Shared samples make this exact: integrand identity from B + B# = -Id.
    GaussianSampler sampler(s.w.model, 41);
    double grad_form = 0.0;
    for (int i = 0; i < 30000; ++i) {
        const Point x = sampler(i);
        grad_form += u.gradient_r(x).dot(s.m.Q.get() * v.gradient_r(x)) *
                     s.w.U.density(x);
    }
    grad_form /= 30000.0;
    CHECK(e.value + ed.value == doctest::Approx(grad_form).epsilon(1e-11));
}
