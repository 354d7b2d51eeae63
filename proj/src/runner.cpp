#include "ousector/runner.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "ousector/builtins.hpp"
#include "ousector/cylinder.hpp"
#include "ousector/forms.hpp"
#include "ousector/galerkin.hpp"
#include "ousector/generator.hpp"
#include "ousector/measure.hpp"
#include "ousector/mehler.hpp"
#include "ousector/rng.hpp"
#include "ousector/sector.hpp"
#include "ousector/wiener.hpp"

namespace ousector {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::vector<CylinderFunction> test_family(int dim, std::uint64_t seed) {
    std::vector<CylinderFunction> family;
    NormalStream ns(derive_seed(seed, 0xfa17ULL));
    Vector b1(dim), b2(dim), bq(dim);
    for (int i = 0; i < dim; ++i) {
        b1(i) = ns.next();
        b2(i) = 0.8 * ns.next();
        bq(i) = 0.5 * ns.next();
    }
    Matrix C(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j <= i; ++j) C(i, j) = C(j, i) = 0.4 * ns.next();
    family.push_back(linear_fn(b1, 0.2));
    family.push_back(quadratic_fn(C, bq, -0.1));
    family.push_back(cos_fn(b2, 0.5));
    family.push_back(sin_fn(b1 * 0.6));
    family.push_back(tanh_fn(b2, 2.0));
    return family;
}

void suite_model(const ExperimentConfig& cfg, const HGeometry& g, RunReport& rep) {
    const int n = g.dim();
    const double tol_drift = tolerance_or(cfg, "drift_algebra", 1e-9);
    std::vector<CheckReport> checks;

    {
        const Matrix& A = g.model.A.get();
        const Matrix& X = g.model.Q_inf.get();
        const double res =
            operator_norm(A * X + X * A.transpose() + g.model.Q.get()) /
            operator_norm(g.model.Q.get());
        checks.push_back(identity_check("lyapunov_residual", res, 0.0, 1e-10));
    }
    {
        const double scale = std::max(1.0, operator_norm(g.B));
        checks.push_back(identity_check(
            "drift_algebra_B_plus_Bsharp",
            operator_norm(g.B + g.B_sharp + Matrix::Identity(n, n)) / scale, 0.0,
            tol_drift));
    }
    {
        NormalStream ns(derive_seed(cfg.seed, 0x6d6fULL));
        double worst = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            Vector h(n);
            for (int i = 0; i < n; ++i) h(i) = ns.next();
            const double lhs = g.h_inner(g.B * h, h);
            const double rhs = -0.5 * g.h_inner(h, h);
            worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
        }
        checks.push_back(identity_check("drift_algebra_bracket", worst, 0.0, tol_drift));
    }
    checks.push_back(identity_check(
        "half_identity_norm",
        g.op_norm_h(g.B + 0.5 * Matrix::Identity(n, n)), 0.5 * g.gamma, 1e-10));
    {
        NormalStream ns(derive_seed(cfg.seed, 0x646fULL));
        double worst = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            Vector xs(n);
            for (int i = 0; i < n; ++i) xs(i) = ns.next();
            const Vector lhs = g.B * (g.model.Q.get() * xs);
            const Vector rhs = g.model.Q_inf.get() * (g.model.A.get().transpose() * xs);
            worst = std::max(worst, (lhs - rhs).norm() / std::max(1.0, rhs.norm()));
        }
        checks.push_back(identity_check("dom_vstar_identity", worst, 0.0, 1e-9));
    }
    {
        const double c = rkhs_constant(g);
        std::ostringstream note;
        note << "c = ||B||_{L(H)} = " << c;
        checks.push_back(info_check("rkhs_constant", note.str()));
        checks.back().observed = c;
    }
    for (double p : cfg.p_list) {
        const SectorParams sp = sector_params(g, p);
        rep.sectors.push_back(sp);
        if (p == 2.0) {
            checks.push_back(
                identity_check("c_theta_at_p2_equals_gamma", sp.c_theta, g.gamma, 1e-12));
        }
    }
    {
        // Rescaling Q leaves the geometry invariant.
        OuModel scaled = build_model(
            StableMatrix::from(g.model.A.get()),
            SpdMatrix::from((2.0 * g.model.Q.get()).eval()));
        const HGeometry g2 = h_geometry(scaled);
        checks.push_back(identity_check("scaling_invariance_B",
                                        operator_norm(g2.B - g.B), 0.0, 1e-9));
        checks.push_back(identity_check("scaling_invariance_gamma", g2.gamma, g.gamma, 1e-9));
    }
    for (auto& c : checks) c.suite = "model";
    rep.checks.insert(rep.checks.end(), checks.begin(), checks.end());
}

void suite_mehler(const ExperimentConfig& cfg, const OuModel& m,
                  const HGeometry& g, RunReport& rep) {
    if (m.dim > 4) {
        rep.checks.push_back(info_check(
            "mehler_suite_skipped",
            "transition-semigroup checks use tensor quadrature and run for dim <= 4"));
        rep.checks.back().suite = "mehler";
        return;
    }
    SemigroupCheckSpec spec;
    spec.outer_samples = std::min<std::int64_t>(cfg.samples, 2000);
    spec.quad.gh_nodes = 16;
    spec.seed = derive_seed(cfg.seed, 0x6d65ULL);
    auto checks = semigroup_properties_check(m, {0.25, 1.0, 4.0}, spec);
    rep.checks.insert(rep.checks.end(), checks.begin(), checks.end());

    {
        NormalStream ns(derive_seed(cfg.seed, 0x636bULL));
        Vector b(m.dim);
        for (int i = 0; i < m.dim; ++i) b(i) = 0.7 * ns.next();
        QuadratureSpec quad;
        quad.gh_nodes = 20;
        auto ck = chapman_kolmogorov_check(m, cos_fn(b, 0.2), 0.3, 0.5, 5, quad,
                                           derive_seed(cfg.seed, 0x636cULL));
        rep.checks.insert(rep.checks.end(), ck.begin(), ck.end());
    }

    // The generator is the small-time derivative of the semigroup:
    // first-order Richardson in h against the unweighted generator.
    {
        const WeightFunction u0 = WeightFunction::zero(m.dim);
        NormalStream ns(derive_seed(cfg.seed, 0x7269ULL));
        Matrix C(m.dim, m.dim);
        for (int i = 0; i < m.dim; ++i)
            for (int j = 0; j <= i; ++j) C(i, j) = C(j, i) = 0.4 * ns.next();
        Vector b(m.dim);
        for (int i = 0; i < m.dim; ++i) b(i) = ns.next();
        const CylinderFunction f = quadratic_fn(C, b, 0.3);
        QuadratureSpec quad;
        quad.gh_nodes = 20;
        const double h = 0.01;
        const Matrix root_inf = spd_sqrt(m.Q_inf).get();
        double worst = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            Vector z(m.dim);
            for (int i = 0; i < m.dim; ++i) z(i) = ns.next();
            const Point x = root_inf * z;
            const double f0 = f.value_r(x);
            const double d1 =
                (mehler_apply(m, f, h, x, quad).value - f0) / h;
            const double d2 =
                (mehler_apply(m, f, 0.5 * h, x, quad).value - f0) / (0.5 * h);
            const double richardson = 2.0 * d2 - d1;
            const double lf = apply_generator(g, u0, f, x).real();
            worst = std::max(worst,
                             std::abs(richardson - lf) / std::max(1.0, std::abs(lf)));
        }
        CheckReport r = identity_check("generator_time_derivative", worst, 0.0,
                                       tolerance_or(cfg, "richardson", 1e-3));
        r.suite = "mehler";
        rep.checks.push_back(r);
    }
    for (auto& c : rep.checks) {
        if (c.suite.empty()) c.suite = "mehler";
    }
}

void suite_forms(const ExperimentConfig& cfg, const HGeometry& g,
                 const WeightedMeasure& w, RunReport& rep) {
    const auto family = test_family(g.dim(), cfg.seed);
    const std::int64_t n = cfg.samples;
    const double sigma = tolerance_or(cfg, "sigma", 3.0);
    const double tol_coercivity = tolerance_or(cfg, "coercivity", 1e-10);
    std::vector<CheckReport> checks;

    // Pointwise identities on shared samples: coercivity, the transpose
    // relation E(u,v) = E~(v,u), and the symmetric-part identity
    // E(u,v) + E~(u,v) = -int [D_H u, D_H v] dnu. All exact.
    {
        const CylinderFunction& u = family[1];
        const CylinderFunction& v = family[2];
        checks.push_back(check_coercivity(g, w, u, std::min<std::int64_t>(n, 20000),
                                          derive_seed(cfg.seed, 1), tol_coercivity));
        const Matrix bq = g.B * w.model.Q.get();
        const Matrix bsq = g.B_sharp * w.model.Q.get();
        const Matrix& q = w.model.Q.get();
        GaussianSampler sampler(w.model, derive_seed(cfg.seed, 2));
        double worst_t = 0.0, worst_s = 0.0;
        const std::int64_t n_pt = std::min<std::int64_t>(n, 20000);
        for (std::int64_t i = 0; i < n_pt; ++i) {
            const Point x = sampler(i);
            const Vector gu = u.gradient_r(x);
            const Vector gv = v.gradient_r(x);
            const double e_uv = -(bq * gu).dot(gv);
            const double ed_vu = -(bsq * gv).dot(gu);
            const double ed_uv = -(bsq * gu).dot(gv);
            const double sym = -gu.dot(q * gv);
            worst_t = std::max(worst_t, std::abs(e_uv - ed_vu) /
                                            std::max(1.0, std::abs(e_uv)));
            worst_s = std::max(worst_s, std::abs(e_uv + ed_uv - sym) /
                                            std::max(1.0, std::abs(sym)));
        }
        checks.push_back(identity_check("transpose_identity", worst_t, 0.0, 1e-10));
        checks.push_back(identity_check("symmetric_part_identity", worst_s, 0.0, 1e-10));
    }
    checks.push_back(check_sector_condition(g, w, family[1], family[3], n,
                                            derive_seed(cfg.seed, 3), sigma));
    {
        auto dual = check_generator_duality(g, w, family[1], family[2], true, n,
                                            derive_seed(cfg.seed, 4), sigma);
        checks.insert(checks.end(), dual.begin(), dual.end());
        // v = 1 reduces the duality to invariance of nu under L.
        auto inv = check_generator_duality(
            g, w, family[1],
            quadratic_fn(Matrix::Zero(g.dim(), g.dim()), Vector::Zero(g.dim()), 1.0),
            false, n, derive_seed(cfg.seed, 5), sigma);
        inv.front().name = "generator_invariance_v1";
        checks.push_back(inv.front());
    }
    checks.push_back(check_dirichlet_operator(g, w, family[4], n,
                                              derive_seed(cfg.seed, 6), sigma));
    checks.push_back(check_dirichlet_operator(g, w, family[0], n,
                                              derive_seed(cfg.seed, 7), sigma));
    for (auto& c : checks) c.suite = "forms";
    rep.checks.insert(rep.checks.end(), checks.begin(), checks.end());
}

void suite_ibp(const ExperimentConfig& cfg, const HGeometry& g,
               const WeightedMeasure& w, RunReport& rep) {
    const double sigma = tolerance_or(cfg, "sigma", 3.0);
    const auto family = test_family(g.dim(), derive_seed(cfg.seed, 0x1b9ULL));
    NormalStream ns(derive_seed(cfg.seed, 0x1baULL));
    int idx = 0;
    for (const auto& f : family) {
        Vector xs(g.dim());
        for (int i = 0; i < g.dim(); ++i) xs(i) = ns.next();
        const Vector h_plain = w.model.Q.get() * xs;
        const Vector h_drift = g.B * h_plain;
        CheckReport r1 = check_ibp(w, g, f, h_plain, cfg.samples,
                                   derive_seed(cfg.seed, 400 + idx), sigma);
        r1.suite = "ibp";
        r1.name = "ibp_h_istar f" + std::to_string(idx);
        rep.checks.push_back(r1);
        CheckReport r2 = check_ibp(w, g, f, h_drift, cfg.samples,
                                   derive_seed(cfg.seed, 500 + idx), sigma);
        r2.suite = "ibp";
        r2.name = "ibp_h_B_istar f" + std::to_string(idx);
        rep.checks.push_back(r2);
        ++idx;
    }
}

void suite_sector(const ExperimentConfig& cfg, const HGeometry& g,
                  const WeightedMeasure& w, RunReport& rep) {
    std::vector<CheckReport> checks;
    const double tol_id = tolerance_or(cfg, "pointwise_identity", 1e-9);
    const double sigma = tolerance_or(cfg, "sigma", 3.0);

    // Pointwise identities at sampled points, p >= 2 from the run list.
    {
        GaussianSampler sampler(w.model, derive_seed(cfg.seed, 0x5ec1ULL));
        std::vector<double> ps;
        for (double p : cfg.p_list) {
            if (p >= 2.0) ps.push_back(p);
        }
        if (ps.empty()) ps = {2.0, 4.0};
        int idx = 0;
        double worst = 0.0;
        std::int64_t evaluated = 0, skipped = 0;
        for (double p : ps) {
            for (int trial = 0; trial < 25; ++trial) {
                const CylinderFunction f =
                    random_complex_quadratic(g.dim(), derive_seed(cfg.seed, 600 + idx));
                const auto sub = check_pointwise_identities(g, f, p, sampler(idx), tol_id);
                for (const auto& c : sub) {
                    if (c.kind == "info") {
                        ++skipped;
                    } else if (std::isfinite(c.residual)) {
                        worst = std::max(worst, c.residual);
                        ++evaluated;
                    } else if (std::isfinite(c.margin)) {
                        worst = std::max(worst, -std::min(0.0, c.margin));
                        ++evaluated;
                    }
                }
                ++idx;
            }
        }
        CheckReport r = identity_check("pointwise_identities_worst", worst, 0.0, tol_id);
        std::ostringstream note;
        note << evaluated << " identities checked, " << skipped << " zero-points skipped";
        r.note = note.str();
        checks.push_back(r);
    }

    // Numerical-range margins, with one fresh-seed retry per function.
    const int n_funcs = 20;
    for (double p : cfg.p_list) {
        int failures = 0;
        double worst_ratio = 1e300;
        for (int trial = 0; trial < n_funcs; ++trial) {
            const CylinderFunction f =
                random_complex_quadratic(g.dim(), derive_seed(cfg.seed, 700 + trial));
            RangeSample rs = check_numerical_range(g, w, f, p, cfg.samples,
                                                   derive_seed(cfg.seed, 800 + trial), sigma);
            if (!rs.passed) {
                rs = check_numerical_range(g, w, f, p, cfg.samples,
                                           derive_seed(cfg.seed, 900 + trial), sigma);
                if (!rs.passed) ++failures;
            }
            if (rs.std_error > 0.0) {
                worst_ratio = std::min(worst_ratio, rs.margin / rs.std_error);
            }
        }
        CheckReport r;
        std::ostringstream nm;
        nm << "numerical_range_margins p=" << p;
        r.name = nm.str();
        r.kind = "statistical";
        r.passed = failures == 0;
        r.margin = worst_ratio;
        r.n_samples = cfg.samples;
        r.seed = cfg.seed;
        std::ostringstream note;
        note << failures << "/" << n_funcs
             << " functions failed after retry; worst margin/sigma = " << worst_ratio;
        r.note = note.str();
        checks.push_back(r);
    }

    // Galerkin section and its field of values. Entries are exact
    // moments when the weight vanishes; under a weight the matrices are
    // MC estimates and the containment is informational.
    if (g.dim() <= 4) {
        try {
            const GalerkinResult gal = galerkin_matrix(
                g, w, cfg.galerkin_degree,
                std::min<std::int64_t>(cfg.samples, 200000), derive_seed(cfg.seed, 0x9a1ULL));
            const double c2 = g.gamma;  // cot(theta_2)
            const FovReport fov = field_of_values(
                gal.L, SpdMatrix::from(gal.G), cfg.fov_resolution, c2,
                gal.exact ? tolerance_or(cfg, "fov", 1e-8) : 0.05);
            rep.fov_boundary = fov.boundary;
            if (gal.exact) {
                CheckReport r = margin_check("fov_sector_containment",
                                             -fov.worst_violation,
                                             gal.exact ? 1e-8 : 0.05);
                std::ostringstream note;
                note << "basis size " << gal.basis.size() << ", worst violation "
                     << fov.worst_violation;
                r.note = note.str();
                checks.push_back(r);
            } else {
                std::ostringstream note;
                note << "Monte Carlo section (n = " << gal.n_samples
                     << "): worst sector violation " << fov.worst_violation;
                checks.push_back(info_check("fov_sector_containment_mc", note.str()));
            }
        } catch (const ConditioningError& e) {
            CheckReport r;
            r.name = "galerkin_section";
            r.kind = "info";
            r.passed = false;
            r.note = e.what();
            checks.push_back(r);
        }
    } else {
        checks.push_back(info_check("galerkin_skipped",
                                    "Galerkin section runs for dim <= 4"));
    }
    for (auto& c : checks) c.suite = "sector";
    rep.checks.insert(rep.checks.end(), checks.begin(), checks.end());
}

void suite_wiener(const ExperimentConfig& cfg, RunReport& rep) {
    std::vector<CheckReport> checks;
    // Trace growth of the truncated stationary covariance in N.
    {
        double prev = 0.0;
        bool monotone = true;
        double last = 0.0;
        for (int n : {2, 4, cfg.wiener_modes}) {
            const SpectralTruncation t = assemble_truncation(n);
            const SpdMatrix qi = wiener_q_infty(t, n == cfg.wiener_modes ? &checks : nullptr);
            last = qi.get().trace();
            monotone &= (last > prev - 1e-15);
            prev = last;
        }
        CheckReport r;
        r.name = "q_infty_trace_monotone_in_N";
        r.kind = "inequality";
        r.passed = monotone;
        r.observed = last;
        checks.push_back(r);
    }
    // Leading Nystrom eigenvalues against the boundary-problem solution.
    {
        const int grid = 2000;
        const auto eigs = classical_eigen(grid);
        double worst = 0.0;
        for (int k = 1; k <= 5; ++k) {
            const double analytic = 1.0 / std::pow((k - 0.5) * 3.14159265358979323846, 2.0);
            worst = std::max(worst, std::abs(eigs[k - 1] - analytic));
        }
        CheckReport r = identity_check("classical_eigenvalues", worst, 0.0,
                                       tolerance_or(cfg, "classical_eigen", 1e-4));
        std::ostringstream note;
        note << "lambda_1 = " << eigs[0] << " (analytic 4/pi^2 = 0.405285), grid " << grid;
        r.note = note.str();
        checks.push_back(r);
    }
    for (auto& c : checks) {
        if (c.suite.empty()) c.suite = "wiener";
    }
    rep.checks.insert(rep.checks.end(), checks.begin(), checks.end());

    auto pipeline = wiener_sector_pipeline(
        cfg.wiener_modes, cfg.p_list,
        std::min<std::int64_t>(cfg.samples, 100000), derive_seed(cfg.seed, 0x3135ULL));
    rep.checks.insert(rep.checks.end(), pipeline.begin(), pipeline.end());
}

} // namespace

OuModel model_from_config(const ExperimentConfig& cfg) {
    switch (cfg.source) {
        case ExperimentConfig::Source::builtin:
            return builtin_model(cfg.builtin_name, cfg.alpha);
        case ExperimentConfig::Source::explicit_matrices:
            return build_model(StableMatrix::from(cfg.A), SpdMatrix::from(cfg.Q));
        case ExperimentConfig::Source::wiener: {
            const SpectralTruncation t = assemble_truncation(cfg.wiener_modes);
            Matrix a = t.drift_eigenvalues.asDiagonal();
            return build_model(StableMatrix::from(a), SpdMatrix::from(t.q));
        }
    }
    throw ConfigError("model_from_config: unreachable source");
}

WeightFunction weight_from_config(const ExperimentConfig& cfg, int dim) {
    switch (cfg.weight) {
        case ExperimentConfig::WeightKind::none:
            return WeightFunction::zero(dim);
        case ExperimentConfig::WeightKind::quadratic: {
            if (cfg.weight_M.size() > 0) return WeightFunction::quadratic(cfg.weight_M);
            return WeightFunction::quadratic(0.5 * Matrix::Identity(dim, dim));
        }
        case ExperimentConfig::WeightKind::logcosh: {
            if (cfg.weight_b.size() > 0) return WeightFunction::log_cosh(cfg.weight_b);
            Vector b = Vector::Zero(dim);
            b(0) = 1.0;
            return WeightFunction::log_cosh(b);
        }
    }
    throw ConfigError("weight_from_config: unreachable kind");
}

RunReport run(const ExperimentConfig& cfg) {
    RunReport rep;
    rep.config = cfg;

    auto guarded = [&rep](const std::string& suite, auto&& body) {
        const auto t0 = Clock::now();
        try {
            body();
        } catch (const Error& e) {
            CheckReport r;
            r.suite = suite;
            r.name = suite + "_suite_error";
            r.kind = "info";
            r.passed = false;
            r.note = e.what();
            rep.checks.push_back(r);
        }
        rep.timing_ms[suite] = ms_since(t0);
    };

    const bool wants_model_suites =
        cfg.suites.count("model") || cfg.suites.count("forms") ||
        cfg.suites.count("sector") || cfg.suites.count("mehler") ||
        cfg.suites.count("ibp");

    if (wants_model_suites) {
        const OuModel model = model_from_config(cfg);
        const HGeometry geom = h_geometry(model);
        const WeightFunction wf = weight_from_config(cfg, model.dim);
        const WeightedMeasure wm{model, wf};

        rep.dim = model.dim;
        rep.q_inf = model.Q_inf.get();
        rep.drift_operator = geom.B;
        rep.gamma = geom.gamma;
        {
            const McEstimate mass = integrate_nu(
                wm, [](const Point&) { return 1.0; },
                std::min<std::int64_t>(cfg.samples, 20000), derive_seed(cfg.seed, 0xa55ULL));
            rep.weighted_mass = mass.mean;
            rep.weighted_mass_std_error = mass.std_error;
        }

        if (cfg.suites.count("model")) {
            guarded("model", [&] { suite_model(cfg, geom, rep); });
        } else {
            for (double p : cfg.p_list) rep.sectors.push_back(sector_params(geom, p));
        }
        if (cfg.suites.count("mehler")) {
            guarded("mehler", [&] { suite_mehler(cfg, model, geom, rep); });
        }
        if (cfg.suites.count("forms")) {
            guarded("forms", [&] { suite_forms(cfg, geom, wm, rep); });
        }
        if (cfg.suites.count("ibp")) {
            guarded("ibp", [&] { suite_ibp(cfg, geom, wm, rep); });
        }
        if (cfg.suites.count("sector")) {
            guarded("sector", [&] { suite_sector(cfg, geom, wm, rep); });
        }
    }
    if (cfg.suites.count("wiener")) {
        guarded("wiener", [&] { suite_wiener(cfg, rep); });
    }

    rep.passed = all_passed(rep.checks);
    return rep;
}

} // namespace ousector
