#include "ousector/mehler.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <sstream>

#include "ousector/measure.hpp"
#include "ousector/rng.hpp"

namespace ousector {

GaussHermite GaussHermite::compute(int n) {
    if (n < 1) throw DomainError("GaussHermite: need at least one node");
    Matrix J = Matrix::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double b = std::sqrt(0.5 * k);
        J(k, k - 1) = b;
        J(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(J);
    GaussHermite gh;
    gh.nodes = es.eigenvalues();
    gh.weights.resize(n);
    const double sqrt_pi = std::sqrt(std::numbers::pi);
    for (int k = 0; k < n; ++k) {
        const double v0 = es.eigenvectors()(0, k);
        gh.weights(k) = sqrt_pi * v0 * v0;
    }
    return gh;
}

GaussLegendre GaussLegendre::compute(int n, double a, double b) {
    if (n < 1) throw DomainError("GaussLegendre: need at least one node");
    Matrix J = Matrix::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double c = k / std::sqrt(4.0 * k * k - 1.0);
        J(k, k - 1) = c;
        J(k - 1, k) = c;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(J);
    GaussLegendre gl;
    gl.nodes.resize(n);
    gl.weights.resize(n);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (int k = 0; k < n; ++k) {
        gl.nodes(k) = mid + half * es.eigenvalues()(k);
        const double v0 = es.eigenvectors()(0, k);
        gl.weights(k) = 2.0 * v0 * v0 * half;
    }
    return gl;
}

namespace {

QuadratureSpec::Method resolve_method(const QuadratureSpec& quad, int dim) {
    if (quad.method != QuadratureSpec::Method::automatic) return quad.method;
    return dim <= 4 ? QuadratureSpec::Method::gauss_hermite
                    : QuadratureSpec::Method::monte_carlo;
}

} // namespace

MehlerResult gaussian_expectation(const SpdMatrix& cov, const Vector& mean,
                                  const std::function<double(const Point&)>& g,
                                  const QuadratureSpec& quad) {
    const int n = static_cast<int>(cov.dim());
    const Matrix root = spd_sqrt(cov).get();
    MehlerResult out;

    switch (resolve_method(quad, n)) {
        case QuadratureSpec::Method::gauss_hermite: {
            const GaussHermite gh = GaussHermite::compute(quad.gh_nodes);
            const double norm = std::pow(std::numbers::pi, -0.5 * n);
            const double sqrt2 = std::numbers::sqrt2;
            std::vector<int> idx(n, 0);
            double sum = 0.0;
            std::int64_t count = 0;
            Point x(n);
            while (true) {
                double w = 1.0;
                Vector s(n);
                for (int i = 0; i < n; ++i) {
                    w *= gh.weights(idx[i]);
                    s(i) = gh.nodes(idx[i]);
                }
                x = mean + sqrt2 * (root * s);
                sum += w * g(x);
                ++count;
                int d = 0;
                while (d < n && ++idx[d] == quad.gh_nodes) idx[d++] = 0;
                if (d == n) break;
            }
            out.value = norm * sum;
            out.std_error = 0.0;
            out.n_evals = count;
            out.method = "gauss_hermite";
            return out;
        }
        case QuadratureSpec::Method::monte_carlo: {
            double sum = 0.0, sumsq = 0.0;
            for (std::int64_t i = 0; i < quad.mc_samples; ++i) {
                NormalStream ns(derive_seed(quad.seed, static_cast<std::uint64_t>(i)));
                Vector z(n);
                for (int k = 0; k < n; ++k) z(k) = ns.next();
                const double v = g(mean + root * z);
                sum += v;
                sumsq += v * v;
            }
            const double m = sum / static_cast<double>(quad.mc_samples);
            const double var = std::max(
                0.0, sumsq / static_cast<double>(quad.mc_samples) - m * m);
            out.value = m;
            out.std_error = quad.mc_samples > 1
                ? std::sqrt(var / static_cast<double>(quad.mc_samples - 1))
                : 0.0;
            out.n_evals = quad.mc_samples;
            out.method = "monte_carlo";
            return out;
        }
        default:
            throw DomainError("gaussian_expectation: unresolved quadrature method");
    }
}

MehlerResult mehler_apply(const OuModel& m, const CylinderFunction& f, double t,
                          const Point& x, const QuadratureSpec& quad) {
    if (!(t > 0.0)) throw DomainError("mehler_apply: t must be positive");
    if (f.dim() != m.dim) throw DimensionError("mehler_apply: dimension mismatch");
    const Matrix flow = matrix_exp(m.A.get(), t);
    const SpdMatrix q_t = integrate_sandwich(m.A, m.Q, t);
    return gaussian_expectation(
        q_t, flow * x, [&f](const Point& y) { return f.value_r(y); }, quad);
}

namespace {

/// Precomputed P(t) for repeated application at many points.
class MehlerOperator {
public:
    MehlerOperator(const OuModel& m, double t, const QuadratureSpec& quad)
        : flow_(matrix_exp(m.A.get(), t)),
          q_t_(integrate_sandwich(m.A, m.Q, t)),
          quad_(quad) {}

    double operator()(const CylinderFunction& f, const Point& x) const {
        return gaussian_expectation(
                   q_t_, flow_ * x, [&f](const Point& y) { return f.value_r(y); },
                   quad_)
            .value;
    }

private:
    Matrix flow_;
    SpdMatrix q_t_;
    QuadratureSpec quad_;
};

} // namespace

std::vector<CheckReport> semigroup_properties_check(
    const OuModel& m, const std::vector<double>& t_grid,
    const SemigroupCheckSpec& spec) {
    const int n = m.dim;
    std::vector<CheckReport> checks;

    NormalStream coeff(derive_seed(spec.seed, 0xfa0ULL));
    Vector b1(n), b2(n), b3(n);
    for (int i = 0; i < n; ++i) {
        b1(i) = coeff.next();
        b2(i) = 0.7 * coeff.next();
        b3(i) = 0.5 * coeff.next();
    }
    Matrix C = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) C(i, j) = C(j, i) = 0.3 * coeff.next();
    C = (C * C.transpose()).eval();  // PSD, so x^T C x >= 0

    const CylinderFunction clamp = clamp01_fn(b1, 0.25);
    const CylinderFunction quad = quadratic_fn(2.0 * C, Vector::Zero(n), 0.0);
    const CylinderFunction wave = cos_fn(b2, 0.3);
    const CylinderFunction smooth01 = [&] {
        return CylinderFunction(
            n,
            [b3](const Point& x) { return Cx(0.5 * (1.0 + std::sin(b3.dot(x))), 0.0); },
            nullptr, nullptr, true, Growth::bounded);
    }();

    const Matrix root_inf = spd_sqrt(m.Q_inf).get();
    auto draw = [&](std::int64_t i) {
        NormalStream ns(derive_seed(spec.seed, 0x1000000ULL + static_cast<std::uint64_t>(i)));
        Vector z(n);
        for (int k = 0; k < n; ++k) z(k) = ns.next();
        return (root_inf * z).eval();
    };

    const double point_tol = 1e-9;
    const std::int64_t n_point = 50;

    for (double t : t_grid) {
        const MehlerOperator P(m, t, spec.quad);
        std::ostringstream tag;
        tag << "t=" << t;

        // (a) positivity and (b) sub-Markov at sampled points. Both are
        // exact up to rounding: the quadrature/MC weights are positive.
        double min_clamp = 1e300, max_clamp = -1e300, min_quad = 1e300;
        double min_s01 = 1e300, max_s01 = -1e300;
        for (std::int64_t i = 0; i < n_point; ++i) {
            const Point x = draw(i);
            const double pc = P(clamp, x);
            min_clamp = std::min(min_clamp, pc);
            max_clamp = std::max(max_clamp, pc);
            min_quad = std::min(min_quad, P(quad, x));
            const double ps = P(smooth01, x);
            min_s01 = std::min(min_s01, ps);
            max_s01 = std::max(max_s01, ps);
        }
        checks.push_back(margin_check("positivity_clamp " + tag.str(), min_clamp, point_tol));
        checks.push_back(margin_check("positivity_quadratic " + tag.str(), min_quad, point_tol));
        checks.push_back(
            margin_check("submarkov_upper_clamp " + tag.str(), 1.0 - max_clamp, point_tol));
        checks.push_back(margin_check("submarkov_lower_smooth " + tag.str(), min_s01, point_tol));
        checks.push_back(
            margin_check("submarkov_upper_smooth " + tag.str(), 1.0 - max_s01, point_tol));

        // (c) L^2 contraction for the bounded wave; (d) invariance for
        // wave, clamp and the quadratic (the latter against the exact
        // stationary moment).
        McAccumulator acc(4);  // wave^2 - (P wave)^2, P wave - wave, P clamp - clamp, P quad
        for (std::int64_t i = 0; i < spec.outer_samples; ++i) {
            const Point x = draw(i);
            const double pw = P(wave, x);
            const double w0 = wave.value_r(x);
            const double row[4] = {w0 * w0 - pw * pw, pw - w0,
                                   P(clamp, x) - clamp.value_r(x), P(quad, x)};
            acc.add(row);
        }
        {
            CheckReport r = margin_check("l2_contraction_wave " + tag.str(), acc.mean(0),
                                         3.0 * acc.std_error(0) + 1e-12);
            r.std_error = acc.std_error(0);
            r.n_samples = spec.outer_samples;
            r.seed = spec.seed;
            checks.push_back(r);
        }
        checks.push_back(statistical_check("invariance_wave " + tag.str(), acc.mean(1),
                                           acc.std_error(1), spec.outer_samples,
                                           spec.seed));
        checks.push_back(statistical_check("invariance_clamp " + tag.str(), acc.mean(2),
                                           acc.std_error(2), spec.outer_samples,
                                           spec.seed));
        // quad(x) = x^T C x, so the stationary mean is Tr(Q_inf C).
        const double stationary_quad = (m.Q_inf.get() * C).trace();
        checks.push_back(statistical_check(
            "invariance_quadratic_moment " + tag.str(), acc.mean(3) - stationary_quad,
            acc.std_error(3), spec.outer_samples, spec.seed));
    }
    for (auto& c : checks) c.suite = "mehler";
    return checks;
}

std::vector<CheckReport> chapman_kolmogorov_check(const OuModel& m,
                                                  const CylinderFunction& f,
                                                  double s, double t, int points,
                                                  const QuadratureSpec& quad,
                                                  std::uint64_t seed) {
    if (m.dim > 4 && resolve_method(quad, m.dim) == QuadratureSpec::Method::monte_carlo) {
        throw DomainError(
            "chapman_kolmogorov_check: nested Monte Carlo not supported; use a "
            "model of dimension <= 4");
    }
    std::vector<CheckReport> checks;
    const MehlerOperator Ps(m, s, quad);
    const MehlerOperator Pt(m, t, quad);
    const MehlerOperator Pst(m, s + t, quad);
    const Matrix root_inf = spd_sqrt(m.Q_inf).get();

    // f must stay evaluable as a bare closure inside the outer rule.
    const CylinderFunction inner(
        m.dim, [&](const Point& y) { return Cx(Ps(f, y), 0.0); }, nullptr, nullptr,
        true, Growth::bounded);

    for (int i = 0; i < points; ++i) {
        NormalStream ns(derive_seed(seed, 0xcc00ULL + static_cast<std::uint64_t>(i)));
        Vector z(m.dim);
        for (int k = 0; k < m.dim; ++k) z(k) = ns.next();
        const Point x = root_inf * z;
        const double lhs = Pst(f, x);
        const double rhs = Pt(inner, x);
        std::ostringstream name;
        name << "chapman_kolmogorov point " << i;
        checks.push_back(identity_check(name.str(), lhs, rhs, 1e-8));
        checks.back().suite = "mehler";
    }
    return checks;
}

} // namespace ousector
