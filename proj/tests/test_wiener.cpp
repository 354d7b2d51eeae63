#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ousector/check.hpp"
#include "ousector/wiener.hpp"
#include "support/oracles.hpp"

using namespace ousector;
using namespace ousector::testing;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("truncation assembly: symmetry, positivity, closed form") {
    const SpectralTruncation t = assemble_truncation(8);
    CHECK(t.q.rows() == 8);
    CHECK((t.q - t.q.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(t.q(0, 0) > 0.0);
    Eigen::SelfAdjointEigenSolver<Matrix> es(t.q, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
    // Diagonal entries are 3/(k^2 pi^2).
    for (int k = 1; k <= 8; ++k) {
        CHECK(t.q(k - 1, k - 1) ==
              doctest::Approx(3.0 / (k * k * kPi * kPi)).epsilon(1e-10));
    }
    CHECK(assemble_truncation(1).q(0, 0) > 0.0);
    CHECK_THROWS_AS(assemble_truncation(0), DomainError);
}

TEST_CASE("truncated stationary covariance: residual, series, traces") {
    const SpectralTruncation t = assemble_truncation(8);
    std::vector<CheckReport> checks;
    const SpdMatrix q_inf = wiener_q_infty(t, &checks);
    REQUIRE(checks.size() >= 3);
    CHECK(checks[0].passed);  // Lyapunov residual

    // Lyapunov output against the closed-form entries derived from the
    // kernel expansion: diagonal 3/(2 k^4 pi^4).
    for (int k = 1; k <= 8; ++k) {
        const double expect = 1.5 / std::pow(static_cast<double>(k), 4.0) /
                              std::pow(kPi, 4.0);
        CHECK(q_inf.get()(k - 1, k - 1) == doctest::Approx(expect).epsilon(1e-9));
    }

    // Against the independent sandwich quadrature at large T.
    Matrix a = t.drift_eigenvalues.asDiagonal();
    const Matrix ref = sandwich_quadrature(a, t.q, 50.0 / (kPi * kPi));
    CHECK((q_inf.get() - ref).norm() <= 1e-8 * std::max(1.0, ref.norm()));
}

TEST_CASE("trace of the truncation grows in N toward the series limits") {
    double prev = 0.0;
    std::vector<double> traces;
    for (int n : {1, 2, 4, 8}) {
        const SpectralTruncation t = assemble_truncation(n);
        const SpdMatrix qi = wiener_q_infty(t);
        const double tr = qi.get().trace();
        CHECK(tr > prev);
        prev = tr;
        traces.push_back(tr);
    }
    // The diagonal series sums to (3/2) sum k^-4 / pi^4 = 1/60.
    CHECK(traces.back() <= 1.0 / 60.0 + 1e-12);
    CHECK(traces.back() == doctest::Approx(1.0 / 60.0).epsilon(1e-3));
    // The published trace display (3 sqrt2 / 2) sum 1/(k^4 pi^4) has
    // limit ~0.023570; its N = 8 partial sum is within 1e-3 of that.
    double printed = 0.0;
    for (int k = 1; k <= 8; ++k) {
        printed += 1.5 * std::numbers::sqrt2 / std::pow(static_cast<double>(k), 4.0) /
                   std::pow(kPi, 4.0);
    }
    CHECK(std::abs(printed - 1.5 * std::numbers::sqrt2 / 90.0) <= 1e-3);
}

TEST_CASE("q_t diagonal follows the doubled-exponent series variant") {
    const SpectralTruncation t = assemble_truncation(4);
    Matrix a = t.drift_eigenvalues.asDiagonal();
    for (double time : {0.005, 0.02}) {
        const Matrix q_t = sandwich_quadrature(a, t.q, time);
        for (int k = 1; k <= 4; ++k) {
            CHECK(q_t(k - 1, k - 1) ==
                  doctest::Approx(wiener_qt_diagonal_series(k, time)).epsilon(1e-8));
        }
    }
}

TEST_CASE("classical eigenvalues of the min kernel") {
    const auto eigs = classical_eigen(2000);
    REQUIRE(eigs.size() >= 5);
    for (int k = 1; k <= 5; ++k) {
        const double analytic = 1.0 / std::pow((k - 0.5) * kPi, 2.0);
        CHECK(std::abs(eigs[k - 1] - analytic) <= 1e-4);
    }
    CHECK(eigs[0] == doctest::Approx(4.0 / (kPi * kPi)).epsilon(1e-3));
    CHECK(eigs[1] == doctest::Approx(std::pow(1.5 * kPi, -2.0)).epsilon(1e-3));
    // Monotone decreasing.
    for (std::size_t i = 1; i < eigs.size(); ++i) CHECK(eigs[i] < eigs[i - 1]);
    CHECK_THROWS_AS(classical_eigen(50), DomainError);
}

TEST_CASE("classical eigenvalue error decays at second order") {
    const double analytic = 4.0 / (kPi * kPi);
    const double e1 = std::abs(classical_eigen(250)[0] - analytic);
    const double e2 = std::abs(classical_eigen(500)[0] - analytic);
    const double ratio = e1 / e2;
    CHECK(ratio >= 2.5);
    CHECK(ratio <= 6.0);
}

TEST_CASE("sector pipeline runs clean at a small truncation") {
    const auto checks = wiener_sector_pipeline(4, {1.5, 2.0, 4.0}, 20000, 2718);
    CHECK(checks.size() >= 25);
    for (const auto& c : checks) {
        CAPTURE(c.name);
        CAPTURE(c.note);
        CHECK(c.passed);
    }
    CHECK_THROWS_AS(wiener_sector_pipeline(13, {2.0}, 100, 1), DomainError);
}
