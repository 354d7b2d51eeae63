#include "ousector/wiener.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <functional>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ousector/cylinder.hpp"
#include "ousector/forms.hpp"
#include "ousector/measure.hpp"
#include "ousector/mehler.hpp"
#include "ousector/model.hpp"
#include "ousector/rng.hpp"
#include "ousector/sector.hpp"
#include "ousector/weight.hpp"

namespace ousector {

namespace {

constexpr double kPi = std::numbers::pi;

double mode_fn(int k, double x) { return std::numbers::sqrt2 * std::sin(k * kPi * x); }

/// int_0^1 min(x, y) e_k(y) dy evaluated at x by Gauss-Legendre on the
/// two smooth pieces [0, x] and [x, 1].
double kernel_apply(int k, double x, const GaussLegendre& unit) {
    double acc = 0.0;
    for (int i = 0; i < unit.nodes.size(); ++i) {
        const double y_lo = x * unit.nodes(i);
        acc += x * unit.weights(i) * y_lo * mode_fn(k, y_lo);
        const double y_hi = x + (1.0 - x) * unit.nodes(i);
        acc += (1.0 - x) * unit.weights(i) * x * mode_fn(k, y_hi);
    }
    return acc;
}

double q_entry_series(int j, int k) {
    double v = 2.0 * ((j + k) % 2 == 0 ? 1.0 : -1.0) / (j * k * kPi * kPi);
    if (j == k) v += 1.0 / (k * k * kPi * kPi);
    return v;
}

double q_inf_entry_series(int j, int k) {
    return q_entry_series(j, k) / ((static_cast<double>(j) * j + static_cast<double>(k) * k) * kPi * kPi);
}

} // namespace

SpectralTruncation assemble_truncation(int modes) {
    if (modes < 1) throw DomainError("assemble_truncation: need at least one mode");
    SpectralTruncation t;
    t.modes = modes;
    t.drift_eigenvalues.resize(modes);
    for (int k = 1; k <= modes; ++k) {
        t.drift_eigenvalues(k - 1) = -static_cast<double>(k) * k * kPi * kPi;
    }

    const GaussLegendre unit = GaussLegendre::compute(32, 0.0, 1.0);
    const GaussLegendre outer = GaussLegendre::compute(48, 0.0, 1.0);
    t.q = Matrix::Zero(modes, modes);
    for (int k = 1; k <= modes; ++k) {
        for (int j = 1; j <= k; ++j) {
            double acc = 0.0;
            for (int i = 0; i < outer.nodes.size(); ++i) {
                const double x = outer.nodes(i);
                acc += outer.weights(i) * mode_fn(j, x) * kernel_apply(k, x, unit);
            }
            t.q(j - 1, k - 1) = acc;
            t.q(k - 1, j - 1) = acc;
        }
    }

    // Quadrature must land on the closed-form expansion of the kernel.
    for (int k = 1; k <= modes; ++k) {
        for (int j = 1; j <= modes; ++j) {
            const double ref = q_entry_series(j, k);
            if (!(std::abs(t.q(j - 1, k - 1) - ref) <= 1e-10 * std::max(1.0, std::abs(ref)))) {
                std::ostringstream os;
                os << "assemble_truncation: quadrature entry (" << j << "," << k
                   << ") = " << t.q(j - 1, k - 1)
                   << " disagrees with the analytic expansion " << ref;
                throw ValidationError(os.str());
            }
        }
    }
    return t;
}

SpdMatrix wiener_q_infty(const SpectralTruncation& trunc,
                         std::vector<CheckReport>* checks) {
    const int n = trunc.modes;
    Matrix a = trunc.drift_eigenvalues.asDiagonal();
    SpdMatrix q_inf = solve_lyapunov(StableMatrix::from(a), SpdMatrix::from(trunc.q));

    if (checks) {
        const Matrix& x = q_inf.get();
        double res = operator_norm(a * x + x * a.transpose() + trunc.q);
        CheckReport lyap;
        lyap.suite = "wiener";
        lyap.name = "q_infty_lyapunov_residual";
        lyap.kind = "identity";
        lyap.residual = res / operator_norm(trunc.q);
        lyap.tolerance = 1e-10;
        lyap.passed = lyap.residual <= lyap.tolerance;
        checks->push_back(lyap);

        // Entrywise comparison with the published series. Reported, not
        // asserted: the display's sqrt(2) bookkeeping is inconsistent
        // between the expansion and the trace formula, so the solver is
        // the source of truth.
        double worst = 0.0;
        for (int j = 1; j <= n; ++j) {
            for (int k = 1; k <= n; ++k) {
                const double ref = q_inf_entry_series(j, k);
                worst = std::max(worst, std::abs(x(j - 1, k - 1) - ref) /
                                            std::max(1e-12, std::abs(ref)));
            }
        }
        std::ostringstream note;
        note << "max relative deviation from the series entries: " << worst;
        checks->push_back(info_check("q_infty_series_entries", note.str()));
        checks->back().suite = "wiener";
        checks->back().residual = worst;

        double trace_true = x.trace();
        double series_diag = 0.0, series_printed = 0.0;
        for (int k = 1; k <= n; ++k) {
            const double k4 = std::pow(static_cast<double>(k), 4.0) * std::pow(kPi, 4.0);
            series_diag += 1.5 / k4;
            series_printed += 1.5 * std::numbers::sqrt2 / k4;
        }
        std::ostringstream tn;
        tn << "trace(Q_inf) = " << trace_true << "; diagonal series 3/(2 k^4 pi^4) sums to "
           << series_diag << "; published trace formula (3 sqrt2/2) sum 1/(k^4 pi^4) gives "
           << series_printed << " (limit " << 1.5 * std::numbers::sqrt2 / 90.0 << ")";
        checks->push_back(info_check("q_infty_trace_variants", tn.str()));
        checks->back().suite = "wiener";
        checks->back().observed = trace_true;
        checks->back().expected = series_printed;
    }
    return q_inf;
}

double wiener_qt_diagonal_series(int k, double t) {
    const double k2 = static_cast<double>(k) * k * kPi * kPi;
    const double k4 = k2 * k2;
    return 1.5 * (1.0 - std::exp(-2.0 * k2 * t)) / k4;
}

std::vector<double> classical_eigen(int grid_points) {
    if (grid_points < 100) {
        throw DomainError("classical_eigen: need at least 100 grid points");
    }
    const int m = grid_points;
    const double h = 1.0 / m;
    // Symmetrized Nystrom matrix D^{1/2} K D^{1/2} with trapezoid
    // weights; subspace iteration extracts the leading eigenvalues (the
    // spectrum decays like k^{-2}, so a small block converges fast).
    Matrix ks(m + 1, m + 1);
    Vector w(m + 1);
    for (int i = 0; i <= m; ++i) w(i) = (i == 0 || i == m) ? 0.5 * h : h;
    for (int i = 0; i <= m; ++i) {
        for (int j = 0; j <= m; ++j) {
            ks(i, j) = std::sqrt(w(i)) * std::min(i, j) * h * std::sqrt(w(j));
        }
    }

    const int block = 12;
    Matrix v(m + 1, block);
    for (int c = 0; c < block; ++c) {
        for (int i = 0; i <= m; ++i) {
            v(i, c) = std::sin((c + 0.5) * kPi * i * h) + 1e-3 * std::cos((c + 1) * i * h);
        }
    }
    Eigen::HouseholderQR<Matrix> qr0(v);
    v = qr0.householderQ() * Matrix::Identity(m + 1, block);
    for (int iter = 0; iter < 30; ++iter) {
        Matrix av = ks * v;
        Eigen::HouseholderQR<Matrix> qr(av);
        v = qr.householderQ() * Matrix::Identity(m + 1, block);
    }
    const Matrix small = v.transpose() * ks * v;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (small + small.transpose()));

    std::vector<double> out(es.eigenvalues().data(),
                            es.eigenvalues().data() + block);
    std::sort(out.begin(), out.end(), std::greater<double>());
    out.resize(8);
    return out;
}

std::vector<CheckReport> wiener_sector_pipeline(int modes,
                                                const std::vector<double>& p_list,
                                                std::int64_t n, std::uint64_t seed) {
    if (modes > 12) {
        throw DomainError("wiener_sector_pipeline: mode budget is N <= 12");
    }
    std::vector<CheckReport> checks;
    auto tag = [&checks](const char* suite) {
        checks.back().suite = suite;
    };

    const SpectralTruncation trunc = assemble_truncation(modes);
    Matrix a = trunc.drift_eigenvalues.asDiagonal();
    OuModel model = build_model(StableMatrix::from(a), SpdMatrix::from(trunc.q));
    (void)wiener_q_infty(trunc, &checks);
    const HGeometry geom = h_geometry(model);

    // Drift-operator algebra at truncation level.
    const int dim = model.dim;
    const double b_scale = std::max(1.0, operator_norm(geom.B));
    checks.push_back(identity_check(
        "drift_algebra_B_plus_Bsharp",
        operator_norm(geom.B + geom.B_sharp + Matrix::Identity(dim, dim)) / b_scale,
        0.0, 1e-9));
    tag("wiener");
    NormalStream hs(derive_seed(seed, 0xabcULL));
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        Vector h(dim);
        for (int i = 0; i < dim; ++i) h(i) = hs.next();
        const double lhs = geom.h_inner(geom.B * h, h);
        const double rhs = -0.5 * geom.h_inner(h, h);
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    }
    checks.push_back(identity_check("drift_algebra_bracket", worst, 0.0, 1e-9));
    tag("wiener");
    checks.push_back(identity_check("half_identity_norm",
                                    geom.op_norm_h(geom.B + 0.5 * Matrix::Identity(dim, dim)),
                                    0.5 * geom.gamma, 1e-10));
    tag("wiener");

    // Lyapunov vs sandwich integral at T = 50/gap.
    {
        const double T = 50.0 / model.A.gap();
        const Matrix q_t = integrate_sandwich(model.A, model.Q, T).get();
        checks.push_back(identity_check(
            "q_infty_vs_sandwich_T",
            operator_norm(q_t - model.Q_inf.get()) / operator_norm(model.Q_inf.get()),
            0.0, 1e-8));
        tag("wiener");
    }

    // Sector parameters per p.
    for (double p : p_list) {
        const SectorParams sp = sector_params(geom, p);
        std::ostringstream note;
        note << "p = " << p << ": theta_p = " << sp.theta_p
             << ", cot(theta_p) = " << sp.c_theta << ", gamma = " << geom.gamma;
        checks.push_back(info_check("sector_params", note.str()));
        tag("wiener");
        if (p == 2.0) {
            checks.push_back(identity_check("c_theta_at_p2_equals_gamma", sp.c_theta,
                                            geom.gamma, 1e-12));
            tag("wiener");
        }
    }

    const WeightFunction u_quad = WeightFunction::quadratic(Matrix::Identity(dim, dim));
    const WeightedMeasure w{model, u_quad};

    // Pointwise identities on random complex functions.
    {
        GaussianSampler sampler(model, derive_seed(seed, 2));
        int idx = 0;
        for (double p : {2.0, 4.0, 6.0}) {
            for (int trial = 0; trial < 8; ++trial) {
                const CylinderFunction f =
                    random_complex_quadratic(dim, derive_seed(seed, 100 + idx));
                auto sub = check_pointwise_identities(geom, f, p, sampler(idx), 1e-9);
                for (auto& c : sub) {
                    c.suite = "wiener";
                    std::ostringstream nm;
                    nm << c.name << " p=" << p << " trial=" << trial;
                    c.name = nm.str();
                }
                checks.insert(checks.end(), sub.begin(), sub.end());
                ++idx;
            }
        }
    }

    // Form checks under the quadratic weight.
    {
        const CylinderFunction u = random_real_cylinder(dim, derive_seed(seed, 11));
        const CylinderFunction v = random_real_cylinder(dim, derive_seed(seed, 12));
        checks.push_back(check_coercivity(geom, w, u, std::min<std::int64_t>(n, 20000),
                                          derive_seed(seed, 13)));
        tag("wiener");
        checks.push_back(check_sector_condition(geom, w, u, v, n, derive_seed(seed, 14)));
        tag("wiener");
        auto dual = check_generator_duality(geom, w, u, v, true, n, derive_seed(seed, 15));
        for (auto& c : dual) c.suite = "wiener";
        checks.insert(checks.end(), dual.begin(), dual.end());
        checks.push_back(
            check_dirichlet_operator(geom, w, u, n, derive_seed(seed, 16)));
        tag("wiener");
    }

    // Weighted integration by parts, including directions h = B i* x*.
    {
        NormalStream xs(derive_seed(seed, 21));
        for (int trial = 0; trial < 4; ++trial) {
            const CylinderFunction f =
                random_real_cylinder(dim, derive_seed(seed, 30 + trial));
            Vector xstar(dim);
            for (int i = 0; i < dim; ++i) xstar(i) = xs.next();
            const Vector h_plain = model.Q.get() * xstar;
            const Vector h_drift = geom.B * h_plain;
            CheckReport r1 = check_ibp(w, geom, f, h_plain, n, derive_seed(seed, 40 + trial));
            r1.suite = "wiener";
            r1.name = "ibp_h_istar trial=" + std::to_string(trial);
            checks.push_back(r1);
            CheckReport r2 = check_ibp(w, geom, f, h_drift, n, derive_seed(seed, 50 + trial));
            r2.suite = "wiener";
            r2.name = "ibp_h_B_istar trial=" + std::to_string(trial);
            checks.push_back(r2);
        }
    }

    // Numerical-range margins.
    for (double p : p_list) {
        int failures = 0;
        double worst_margin_sigma = 1e300;
        const int n_funcs = 20;
        for (int trial = 0; trial < n_funcs; ++trial) {
            const CylinderFunction f =
                random_complex_quadratic(dim, derive_seed(seed, 1000 + trial));
            RangeSample rs =
                check_numerical_range(geom, w, f, p, n, derive_seed(seed, 2000 + trial));
            if (!rs.passed) {
                // Statistical retry with a fresh seed; see the suite
                // false-failure policy.
                rs = check_numerical_range(geom, w, f, p, n,
                                           derive_seed(seed, 3000 + trial));
                if (!rs.passed) ++failures;
            }
            if (rs.std_error > 0.0) {
                worst_margin_sigma = std::min(worst_margin_sigma, rs.margin / rs.std_error);
            }
        }
        CheckReport r;
        r.suite = "wiener";
        std::ostringstream nm;
        nm << "numerical_range_margins p=" << p;
        r.name = nm.str();
        r.kind = "statistical";
        r.passed = failures == 0;
        r.margin = worst_margin_sigma;
        r.n_samples = n;
        r.seed = seed;
        std::ostringstream note;
        note << failures << "/" << n_funcs
             << " functions failed the -3 sigma margin after one retry; worst margin/sigma = "
             << worst_margin_sigma;
        r.note = note.str();
        checks.push_back(r);
    }

    // The closed form Q_t = Q_inf (Id - e^{tA}) printed for the
    // classical Wiener construction disagrees with direct integration;
    // recorded against the solver value, not asserted.
    {
        const double q_inf_1d = 0.5;
        const double q_1d = std::sqrt(q_inf_1d);
        const double a_1d = -q_1d;
        const double t = 1.0;
        const double direct = q_1d * (1.0 - std::exp(2.0 * a_1d * t)) / (2.0 * q_1d);
        const double printed = q_inf_1d * (1.0 - std::exp(a_1d * t));
        const double sandwich = integrate_sandwich(
            StableMatrix::from(Matrix::Constant(1, 1, a_1d)),
            SpdMatrix::from(Matrix::Constant(1, 1, q_1d)), t).get()(0, 0);
        std::ostringstream note;
        note << "A = -Q = -sqrt(1/2), t = 1: solver Q_t = " << sandwich
             << ", direct integral " << direct << ", printed closed form Q_inf(1 - e^{tA}) = "
             << printed;
        checks.push_back(info_check("classical_wiener_qt_closed_form", note.str()));
        tag("wiener");
    }

    return checks;
}

} // namespace ousector
