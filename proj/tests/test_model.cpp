#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ousector/builtins.hpp"
#include "ousector/model.hpp"
#include "ousector/rng.hpp"
#include "support/oracles.hpp"

using namespace ousector;
using namespace ousector::testing;

namespace {

OuModel rotation_model(double alpha) { return builtin_model("rotation", alpha); }

} // namespace

TEST_CASE("build_model examples") {
    {
        const OuModel m = build_model(
            StableMatrix::from((-Matrix::Identity(2, 2)).eval()),
            SpdMatrix::from(Matrix::Identity(2, 2).eval()));
        CHECK((m.Q_inf.get() - 0.5 * Matrix::Identity(2, 2)).norm() <= 1e-12);
    }
    {
        Matrix a(2, 2);
        a << -1.0, 1.0, -1.0, -1.0;
        const OuModel m = build_model(
            StableMatrix::from(a), SpdMatrix::from((2.0 * Matrix::Identity(2, 2)).eval()));
        CHECK((m.Q_inf.get() - Matrix::Identity(2, 2)).norm() <= 1e-11);
    }
    {
        Matrix a = Matrix::Zero(2, 2);
        a(0, 0) = -1.0;
        a(1, 1) = -3.0;
        Matrix q = Matrix::Zero(2, 2);
        q(0, 0) = 2.0;
        q(1, 1) = 6.0;
        const OuModel m = build_model(StableMatrix::from(a), SpdMatrix::from(q));
        CHECK((m.Q_inf.get() - Matrix::Identity(2, 2)).norm() <= 1e-12);
    }
    CHECK_THROWS_AS(
        build_model(StableMatrix::from((-Matrix::Identity(2, 2)).eval()),
                    SpdMatrix::from(Matrix::Identity(3, 3).eval())),
        DimensionError);
}

TEST_CASE("h_geometry scalar example: B = -1/2, gamma = 0") {
    const OuModel m = build_model(StableMatrix::from(Matrix::Constant(1, 1, -1.0)),
                                  SpdMatrix::from(Matrix::Constant(1, 1, 2.0)));
    const HGeometry g = h_geometry(m);
    CHECK(g.B(0, 0) == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(g.gamma == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("h_geometry rotation model: B = A^T/2 and gamma = |alpha|") {
    for (double alpha : {0.25, 0.5, 2.0, -1.5}) {
        const OuModel m = rotation_model(alpha);
        const HGeometry g = h_geometry(m);
        CHECK((g.B - 0.5 * m.A.get().transpose()).norm() <= 1e-11);
        Matrix anti(2, 2);
        anti << 0.0, -alpha, alpha, 0.0;
        CHECK((g.B - g.B_sharp - anti).norm() <= 1e-11);
        CHECK(g.gamma == doctest::Approx(std::abs(alpha)).epsilon(1e-11));
    }
}

TEST_CASE("h_geometry symmetric commuting case has gamma = 0") {
    Matrix a(2, 2);
    a << -2.0, 0.4, 0.4, -1.0;
    // Q commutes with A (a polynomial in A), so B is H-symmetric.
    Matrix q = 3.0 * Matrix::Identity(2, 2) - a;
    const OuModel m = build_model(StableMatrix::from(a), SpdMatrix::from(q));
    const HGeometry g = h_geometry(m);
    CHECK(g.gamma <= 1e-10);
}

TEST_CASE("drift operator algebra on random systems") {
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + trial % 8;
        const auto [a, q] = random_stable_system(n, 31000 + trial);
        const HGeometry g = h_geometry(build_model(a, q));
        CHECK(operator_norm(g.B + g.B_sharp + Matrix::Identity(n, n)) <= 1e-9);

        NormalStream ns(derive_seed(500 + trial, 1));
        for (int h_trial = 0; h_trial < 10; ++h_trial) {
            Vector h(n);
            for (int i = 0; i < n; ++i) h(i) = ns.next();
            CHECK(std::abs(g.h_inner(g.B * h, h) + 0.5 * g.h_inner(h, h)) <=
                  1e-9 * std::max(1.0, g.h_inner(h, h)));
        }
        // ||B + Id/2||_{L(H)} = gamma/2.
        CHECK(g.op_norm_h(g.B + 0.5 * Matrix::Identity(n, n)) ==
              doctest::Approx(0.5 * g.gamma).epsilon(1e-10));
    }
}

TEST_CASE("scaling Q leaves B, gamma and theta_p unchanged") {
    for (int trial = 0; trial < 10; ++trial) {
        const auto [a, q] = random_stable_system(4, 600 + trial);
        const HGeometry g1 = h_geometry(build_model(a, q));
        const HGeometry g2 = h_geometry(build_model(
            StableMatrix::from(a.get()), SpdMatrix::from((3.7 * q.get()).eval())));
        CHECK((g1.B - g2.B).norm() <= 1e-9 * std::max(1.0, g1.B.norm()));
        CHECK(g1.gamma == doctest::Approx(g2.gamma).epsilon(1e-9));
        CHECK(sector_params(g1, 3.0).theta_p ==
              doctest::Approx(sector_params(g2, 3.0).theta_p).epsilon(1e-10));
    }
}

TEST_CASE("sector_params closed-form cases") {
    {
        const HGeometry g = h_geometry(rotation_model(0.0));
        const SectorParams s = sector_params(g, 2.0);
        CHECK(s.c_theta == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(s.theta_p == doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-14));
        const SectorParams s4 = sector_params(g, 4.0);
        CHECK(s4.c_theta == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
        CHECK(s4.theta_p == doctest::Approx(std::numbers::pi / 3.0).epsilon(1e-12));
    }
    {
        const HGeometry g = h_geometry(rotation_model(0.8));
        CHECK(sector_params(g, 2.0).c_theta == doctest::Approx(0.8).epsilon(1e-11));
    }
    CHECK_THROWS_AS(sector_params(h_geometry(rotation_model(0.5)), 1.0), DomainError);
    CHECK_THROWS_AS(sector_params(h_geometry(rotation_model(0.5)), 0.3), DomainError);
}

TEST_CASE("theta_p is maximal at p = 2") {
    for (double alpha : {0.4, 1.0, 2.5}) {
        const HGeometry g = h_geometry(rotation_model(alpha));
        const double theta2 = sector_params(g, 2.0).theta_p;
        for (double p = 1.1; p <= 10.0; p += 0.1) {
            CHECK(sector_params(g, p).theta_p <= theta2 + 1e-12);
        }
    }
}

TEST_CASE("rkhs_constant closed forms and norm bound") {
    {
        const OuModel m = build_model(StableMatrix::from(Matrix::Constant(1, 1, -1.0)),
                                      SpdMatrix::from(Matrix::Constant(1, 1, 2.0)));
        CHECK(rkhs_constant(h_geometry(m)) == doctest::Approx(0.5).epsilon(1e-12));
    }
    for (double alpha : {0.5, 1.5}) {
        const HGeometry g = h_geometry(rotation_model(alpha));
        CHECK(rkhs_constant(g) ==
              doctest::Approx(0.5 * std::sqrt(1.0 + alpha * alpha)).epsilon(1e-11));
    }
    {
        const OuModel m = build_model(
            StableMatrix::from((-Matrix::Identity(3, 3)).eval()),
            SpdMatrix::from((0.7 * Matrix::Identity(3, 3)).eval()));
        CHECK(rkhs_constant(h_geometry(m)) == doctest::Approx(0.5).epsilon(1e-12));
    }
}
