#include "ousector/forms.hpp"

#include <cmath>

#include "ousector/generator.hpp"

namespace ousector {

FormValue dirichlet_form(const HGeometry& g, const WeightedMeasure& w,
                         const CylinderFunction& u, const CylinderFunction& v,
                         bool adjoint, std::int64_t n, std::uint64_t seed) {
    const Matrix& drift = adjoint ? g.B_sharp : g.B;
    // -[B D_H u, D_H v]_H = -(B Q grad u) . grad v; Q^{-1} cancels.
    const Matrix bq = drift * w.model.Q.get();
    GaussianSampler sampler(w.model, seed);
    McAccumulator acc(1);
    for (std::int64_t i = 0; i < n; ++i) {
        const Point x = sampler(i);
        const double val =
            -(bq * u.gradient_r(x)).dot(v.gradient_r(x)) * w.U.density(x);
        acc.add(&val);
    }
    FormValue out;
    out.value = acc.mean(0);
    out.std_error = acc.std_error(0);
    out.n_samples = n;
    out.seed = seed;
    return out;
}

CheckReport check_coercivity(const HGeometry& g, const WeightedMeasure& w,
                             const CylinderFunction& u, std::int64_t n,
                             std::uint64_t seed, double tol) {
    const Matrix bq = g.B * w.model.Q.get();
    const Matrix& q = w.model.Q.get();
    GaussianSampler sampler(w.model, seed);
    double worst = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        const Point x = sampler(i);
        const Vector grad = u.gradient_r(x);
        const double lhs = -(bq * grad).dot(grad);
        const double rhs = 0.5 * grad.dot(q * grad);
        const double res = std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
        worst = std::max(worst, res);
    }
    CheckReport r;
    r.name = "coercivity_pointwise";
    r.kind = "identity";
    r.residual = worst;
    r.tolerance = tol;
    r.passed = worst <= tol;
    r.n_samples = n;
    r.seed = seed;
    return r;
}

CheckReport check_sector_condition(const HGeometry& g, const WeightedMeasure& w,
                                   const CylinderFunction& u,
                                   const CylinderFunction& v, std::int64_t n,
                                   std::uint64_t seed, double sigma) {
    const double b_norm = g.op_norm_h(g.B);
    const Matrix bq = g.B * w.model.Q.get();
    const Matrix& q = w.model.Q.get();
    GaussianSampler sampler(w.model, seed);
    McAccumulator acc(3);  // form integrand, |D_H u|^2, |D_H v|^2
    for (std::int64_t i = 0; i < n; ++i) {
        const Point x = sampler(i);
        const Vector gu = u.gradient_r(x);
        const Vector gv = v.gradient_r(x);
        const double density = w.U.density(x);
        const double row[3] = {-(bq * gu).dot(gv) * density,
                               gu.dot(q * gu) * density,
                               gv.dot(q * gv) * density};
        acc.add(row);
    }
    const double form = acc.mean(0);
    const double nu = std::sqrt(std::max(0.0, acc.mean(1)));
    const double nv = std::sqrt(std::max(0.0, acc.mean(2)));
    const double margin = b_norm * nu * nv - std::abs(form);

    // Delta-method gradient of the margin in the three means.
    std::vector<double> grad(3, 0.0);
    grad[0] = form >= 0.0 ? -1.0 : 1.0;
    grad[1] = nu > 0.0 ? b_norm * nv / (2.0 * nu) : 0.0;
    grad[2] = nv > 0.0 ? b_norm * nu / (2.0 * nv) : 0.0;
    const double se = acc.std_error(grad);

    CheckReport r = margin_check("sector_condition", margin, sigma * se + 1e-12);
    r.std_error = se;
    r.n_samples = n;
    r.seed = seed;
    return r;
}

std::vector<CheckReport> check_generator_duality(const HGeometry& g,
                                                 const WeightedMeasure& w,
                                                 const CylinderFunction& u,
                                                 const CylinderFunction& v,
                                                 bool adjoint, std::int64_t n,
                                                 std::uint64_t seed, double sigma) {
    std::vector<CheckReport> checks;
    const Matrix bq = g.B * w.model.Q.get();
    GaussianSampler sampler(w.model, seed);
    {
        McAccumulator acc(1);
        for (std::int64_t i = 0; i < n; ++i) {
            const Point x = sampler(i);
            const double density = w.U.density(x);
            const double form = -(bq * u.gradient_r(x)).dot(v.gradient_r(x)) * density;
            const double gen =
                -apply_generator(g, w.U, u, x).real() * v.value_r(x) * density;
            const double d = form - gen;
            acc.add(&d);
        }
        checks.push_back(statistical_check("generator_form_duality", acc.mean(0),
                                           acc.std_error(0), n, seed, sigma));
    }
    if (adjoint) {
        McAccumulator acc(1);
        for (std::int64_t i = 0; i < n; ++i) {
            const Point x = sampler(i);
            const double density = w.U.density(x);
            const double lhs =
                apply_generator_adjoint(g, w.U, u, x).real() * v.value_r(x) * density;
            const double rhs =
                u.value_r(x) * apply_generator(g, w.U, v, x).real() * density;
            const double d = lhs - rhs;
            acc.add(&d);
        }
        checks.push_back(statistical_check("adjoint_generator_duality", acc.mean(0),
                                           acc.std_error(0), n, seed, sigma));
    }
    return checks;
}

CheckReport check_dirichlet_operator(const HGeometry& g, const WeightedMeasure& w,
                                     const CylinderFunction& u, std::int64_t n,
                                     std::uint64_t seed, double sigma) {
    const Matrix bq = g.B * w.model.Q.get();
    GaussianSampler sampler(w.model, seed);
    McAccumulator acc(1);
    std::int64_t excluded = 0;
    for (std::int64_t i = 0; i < n; ++i) {
        const Point x = sampler(i);
        const double uv = u.value_r(x);
        if (std::abs(uv - 1.0) <= 1e-12) {
            ++excluded;
            const double zero = 0.0;
            acc.add(&zero);
            continue;
        }
        double val = 0.0;
        if (uv > 1.0) {
            const Vector gu = u.gradient_r(x);
            val = (bq * gu).dot(gu) * w.U.density(x);
        }
        acc.add(&val);
    }
    const double mean = acc.mean(0);
    const double se = acc.std_error(0);
    CheckReport r = margin_check("dirichlet_operator", -mean, sigma * se + 1e-12);
    r.observed = mean;
    r.std_error = se;
    r.n_samples = n;
    r.seed = seed;
    if (excluded > 0) {
        r.note = "excluded " + std::to_string(excluded) + " samples with |u-1| <= 1e-12";
    }
    return r;
}

} // namespace ousector
