#include <doctest.h>

#include <cmath>

#include "ousector/linalg.hpp"
#include "support/oracles.hpp"

using namespace ousector;
using namespace ousector::testing;

TEST_CASE("matrix_exp of zero is the identity") {
    const Matrix z = Matrix::Zero(2, 2);
    CHECK((matrix_exp(z, 1.0) - Matrix::Identity(2, 2)).norm() == 0.0);
}

TEST_CASE("matrix_exp rotation generator gives the rotation matrix") {
    Matrix j(2, 2);
    j << 0.0, 1.0, -1.0, 0.0;
    for (double t : {0.3, 1.7, -2.4}) {
        const Matrix e = matrix_exp(j, t);
        Matrix rot(2, 2);
        rot << std::cos(t), std::sin(t), -std::sin(t), std::cos(t);
        CHECK((e - rot).norm() <= 1e-12);
        // Independent route: plain power series.
        CHECK((e - exp_series(j, t)).norm() <= 1e-12);
    }
}

TEST_CASE("matrix_exp diagonal case") {
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = -1.0;
    d(1, 1) = -2.0;
    const Matrix e = matrix_exp(d, 1.0);
    CHECK(e(0, 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(e(1, 1) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
    CHECK(std::abs(e(0, 1)) + std::abs(e(1, 0)) == 0.0);
}

TEST_CASE("matrix_exp semigroup property on random matrices") {
    for (int trial = 0; trial < 20; ++trial) {
        const auto [a, q] = random_stable_system(2 + trial % 5, 100 + trial);
        const Matrix& m = a.get();
        const double s = 0.4, t = 0.9;
        const Matrix lhs = matrix_exp(m, s + t);
        const Matrix rhs = matrix_exp(m, s) * matrix_exp(m, t);
        CHECK((lhs - rhs).norm() <= 1e-10 * std::max(1.0, lhs.norm()));
    }
}

TEST_CASE("matrix_exp is contractive when the symmetric part is negative") {
    for (int trial = 0; trial < 10; ++trial) {
        const auto [a, q] = random_stable_system(4, 300 + trial);
        // Drift built as -S + K has symmetric part -S <= 0.
        for (double t : {0.1, 0.5, 2.0, 10.0}) {
            CHECK(operator_norm(matrix_exp(a.get(), t)) <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("matrix_exp rejects non-square input") {
    CHECK_THROWS_AS(matrix_exp(Matrix::Zero(2, 3), 1.0), DimensionError);
}

TEST_CASE("solve_lyapunov with A = -Id halves Q") {
    for (int n : {1, 2, 5}) {
        const auto q = SpdMatrix::from(
            (Matrix::Identity(n, n) * 2.0 + Matrix::Ones(n, n) * 0.3).eval());
        const auto a = StableMatrix::from((-Matrix::Identity(n, n)).eval());
        const SpdMatrix x = solve_lyapunov(a, q);
        CHECK((x.get() - 0.5 * q.get()).norm() <= 1e-12 * q.get().norm());
    }
}

TEST_CASE("solve_lyapunov rotation family gives the identity") {
    for (double alpha : {0.0, 0.5, -1.3, 4.0}) {
        Matrix a(2, 2);
        a << -1.0, alpha, -alpha, -1.0;
        const SpdMatrix x = solve_lyapunov(
            StableMatrix::from(a),
            SpdMatrix::from((2.0 * Matrix::Identity(2, 2)).eval()));
        CHECK((x.get() - Matrix::Identity(2, 2)).norm() <= 1e-11);
    }
}

TEST_CASE("solve_lyapunov scalar closed form q/(2a)") {
    const SpdMatrix x = solve_lyapunov(
        StableMatrix::from(Matrix::Constant(1, 1, -1.7)),
        SpdMatrix::from(Matrix::Constant(1, 1, 0.9)));
    CHECK(x.get()(0, 0) == doctest::Approx(0.9 / (2.0 * 1.7)).epsilon(1e-12));
}

TEST_CASE("solve_lyapunov matches the Kronecker oracle") {
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 1 + trial % 8;
        const auto [a, q] = random_stable_system(n, 4000 + trial);
        const Matrix x = solve_lyapunov(a, q).get();
        const Matrix ref = lyapunov_kronecker(a.get(), q.get());
        CHECK((x - ref).norm() <= 1e-9 * std::max(1.0, ref.norm()));
    }
}

TEST_CASE("solve_lyapunov rejects unstable drift and dimension mismatch") {
    CHECK_THROWS_AS(StableMatrix::from(Matrix::Identity(2, 2).eval()), StabilityError);
    CHECK_THROWS_AS(StableMatrix::from(Matrix::Zero(2, 2).eval()), StabilityError);
    const auto a = StableMatrix::from((-Matrix::Identity(2, 2)).eval());
    const auto q3 = SpdMatrix::from(Matrix::Identity(3, 3).eval());
    CHECK_THROWS_AS(solve_lyapunov(a, q3), DimensionError);
}

TEST_CASE("integrate_sandwich scalar closed form") {
    const auto a = StableMatrix::from(Matrix::Constant(1, 1, -1.0));
    const auto q = SpdMatrix::from(Matrix::Constant(1, 1, 0.8));
    for (double t : {0.2, 1.0, 3.5}) {
        const double expected = 0.4 * (1.0 - std::exp(-2.0 * t));
        CHECK(integrate_sandwich(a, q, t).get()(0, 0) ==
              doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("integrate_sandwich approaches the stationary covariance") {
    const auto [a, q] = random_stable_system(3, 77);
    const Matrix q_inf = solve_lyapunov(a, q).get();
    const double T = 50.0 / a.gap();
    const Matrix q_T = integrate_sandwich(a, q, T).get();
    CHECK((q_T - q_inf).norm() <= 1e-10 * q_inf.norm());
}

TEST_CASE("integrate_sandwich near zero time vanishes linearly") {
    const auto [a, q] = random_stable_system(2, 78);
    const double t = 1e-8;
    CHECK(integrate_sandwich(a, q, t).get().norm() <= 2.0 * t * q.get().norm());
}

TEST_CASE("integrate_sandwich rejects t <= 0") {
    const auto [a, q] = random_stable_system(2, 79);
    CHECK_THROWS_AS(integrate_sandwich(a, q, 0.0), DomainError);
    CHECK_THROWS_AS(integrate_sandwich(a, q, -1.0), DomainError);
}

TEST_CASE("integrate_sandwich agrees with panel quadrature") {
    for (int trial = 0; trial < 12; ++trial) {
        const int n = 1 + trial % 5;
        const auto [a, q] = random_stable_system(n, 900 + trial);
        for (double t : {0.3, 1.1, 4.0}) {
            const Matrix lhs = integrate_sandwich(a, q, t).get();
            const Matrix ref = sandwich_quadrature(a.get(), q.get(), t);
            CHECK((lhs - ref).norm() <= 1e-9 * std::max(1.0, ref.norm()));
        }
    }
}

TEST_CASE("integrate_sandwich is monotone in the semidefinite order") {
    const auto [a, q] = random_stable_system(4, 55);
    const Matrix q_inf = solve_lyapunov(a, q).get();
    Matrix prev = Matrix::Zero(4, 4);
    for (double t : {0.1, 0.4, 1.0, 3.0, 9.0}) {
        const Matrix cur = integrate_sandwich(a, q, t).get();
        Eigen::SelfAdjointEigenSolver<Matrix> step((cur - prev).eval(),
                                                   Eigen::EigenvaluesOnly);
        CHECK(step.eigenvalues().minCoeff() >= -1e-11);
        Eigen::SelfAdjointEigenSolver<Matrix> cap((q_inf - cur).eval(),
                                                  Eigen::EigenvaluesOnly);
        CHECK(cap.eigenvalues().minCoeff() >= -1e-11);
        prev = cur;
    }
}

TEST_CASE("spd_sqrt basics and residual contract") {
    CHECK((spd_sqrt(SpdMatrix::from(Matrix::Identity(3, 3).eval())).get() -
           Matrix::Identity(3, 3))
              .norm() <= 1e-14);
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 4.0;
    d(1, 1) = 9.0;
    const Matrix r = spd_sqrt(SpdMatrix::from(d)).get();
    CHECK(r(0, 0) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(r(1, 1) == doctest::Approx(3.0).epsilon(1e-13));

    for (int trial = 0; trial < 10; ++trial) {
        const auto [a, q] = random_stable_system(6, 777 + trial);
        const Matrix root = spd_sqrt(q).get();
        CHECK((root * root - q.get()).norm() <= 1e-10 * q.get().norm());
    }
}

TEST_CASE("spd types reject bad input") {
    Matrix asym(2, 2);
    asym << 1.0, 0.5, -0.5, 1.0;
    CHECK_THROWS_AS(SpdMatrix::from(asym), DefinitenessError);
    Matrix indef(2, 2);
    indef << 1.0, 0.0, 0.0, -1.0;
    CHECK_THROWS_AS(SpdMatrix::from(indef), DefinitenessError);
    CHECK_THROWS_AS(SpdMatrix::from(Matrix::Zero(2, 3).eval()), DimensionError);
}
