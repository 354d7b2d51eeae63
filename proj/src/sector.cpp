#include "ousector/sector.hpp"

#include <cmath>

namespace ousector {

namespace {

constexpr double kZeroCutoff = 1e-12;

inline Cx bidot(const CVector& a, const CVector& b) {
    return (a.array() * b.array()).sum();
}

} // namespace

Cx dual_function(const CylinderFunction& f, double p, const Point& x) {
    if (!(p > 1.0)) throw DomainError("dual_function: p must exceed 1");
    const Cx v = f.value(x);
    const double mod = std::abs(v);
    if (mod == 0.0) return Cx(0.0, 0.0);
    return std::conj(v) * std::pow(mod, p - 2.0);
}

CVector dual_gradient(const CylinderFunction& f, double p, const Point& x) {
    if (!(p > 1.0)) throw DomainError("dual_gradient: p must exceed 1");
    const Cx v = f.value(x);
    const double mod = std::abs(v);
    const CVector grad = f.gradient(x);
    if (mod == 0.0) {
        if (p >= 2.0) return CVector::Zero(grad.size());
        throw DomainError("dual_gradient: singular at a zero of f for p < 2");
    }
    const Vector re_part = (std::conj(v) * grad.array()).real().matrix();
    return std::pow(mod, p - 2.0) * grad.conjugate() +
           (p - 2.0) * std::pow(mod, p - 4.0) * std::conj(v) * re_part.cast<Cx>();
}

std::vector<CheckReport> check_pointwise_identities(const HGeometry& g,
                                                    const CylinderFunction& f,
                                                    double p, const Point& x,
                                                    double tol) {
    std::vector<CheckReport> checks;
    const Cx v = f.value(x);
    const double mod = std::abs(v);
    if (mod < kZeroCutoff) {
        checks.push_back(info_check("pointwise_identities_skipped",
                                    "|f(x)| < 1e-12; point skipped"));
        return checks;
    }

    const Matrix& Q = g.model.Q.get();
    const Matrix BQ = g.B * Q;
    const Matrix BsQ = g.B_sharp * Q;

    const CVector grad = f.gradient(x);
    const CVector grad_dual = dual_gradient(f, p, x);

    // [B D_H u, D_H v]_H reduces to (B Q grad u) . grad v.
    const Cx lhs = bidot((BQ.cast<Cx>() * grad).eval(), grad_dual);
    const Cx lhs_sharp = bidot((BsQ.cast<Cx>() * grad).eval(), grad_dual);

    const Vector gr = (std::conj(v) * grad.array()).real().matrix();
    const Vector gi = (std::conj(v) * grad.array()).imag().matrix();
    const double a2 = gr.dot(Q * gr);  // |Re(conj(f) D_H f)|_H^2
    const double b2 = gi.dot(Q * gi);
    const double wgt = std::pow(mod, p - 4.0);

    const double re_expected = -0.5 * wgt * ((p - 1.0) * a2 + b2);
    checks.push_back(identity_check("re_identity", lhs.real(), re_expected, tol));
    checks.push_back(
        identity_check("re_identity_adjoint", lhs_sharp.real(), re_expected, tol));

    // Im[B D_H f, D_H f*] = |f|^{p-4} (p [B F_i, F_r]_H + [F_i, F_r]_H).
    const double bfi_fr = (BQ * gi).dot(gr);
    const double fi_fr = gi.dot(Q * gr);
    const double im_expected = wgt * (p * bfi_fr + fi_fr);
    checks.push_back(identity_check("im_identity", lhs.imag(), im_expected, tol));

    const double c_theta = std::sqrt((p - 2.0) * (p - 2.0) + p * p * g.gamma * g.gamma) /
                           (2.0 * std::sqrt(p - 1.0));
    const double scale = std::max(1.0, -lhs.real());
    checks.push_back(margin_check("im_re_chain",
                                  (-c_theta * lhs.real() - std::abs(lhs.imag())) / scale,
                                  tol));
    return checks;
}

RangeSample check_numerical_range(const HGeometry& g, const WeightedMeasure& w,
                                  const CylinderFunction& f, double p,
                                  std::int64_t n, std::uint64_t seed, double sigma) {
    if (!(p > 1.0)) throw DomainError("check_numerical_range: p must exceed 1");
    const Matrix BQ = (g.B * w.model.Q.get()).eval();
    const double c_theta =
        std::sqrt((p - 2.0) * (p - 2.0) + p * p * g.gamma * g.gamma) /
        (2.0 * std::sqrt(p - 1.0));

    GaussianSampler sampler(w.model, seed);
    McAccumulator acc(2);
    std::int64_t excluded = 0;
    for (std::int64_t i = 0; i < n; ++i) {
        const Point x = sampler(i);
        // |f|^{p-4} is singular at zeros of f when p < 4; such points
        // carry zero measure and are excluded from the integrand.
        if (p < 4.0 && std::abs(f.value(x)) < kZeroCutoff) {
            ++excluded;
            continue;
        }
        const CVector grad = f.gradient(x);
        const CVector grad_dual = dual_gradient(f, p, x);
        const Cx s = bidot((BQ.cast<Cx>() * grad).eval(), grad_dual) * w.U.density(x);
        const double row[2] = {s.real(), s.imag()};
        acc.add(row);
    }

    RangeSample out;
    out.re = acc.mean(0);
    out.im = acc.mean(1);
    out.value = Cx(out.re, out.im);
    out.c_theta = c_theta;
    out.margin = -c_theta * out.re - std::abs(out.im);
    const std::vector<double> grad_margin = {-c_theta, out.im >= 0.0 ? -1.0 : 1.0};
    out.std_error = acc.std_error(grad_margin);
    out.n_samples = acc.count();
    out.excluded = excluded;
    out.seed = seed;
    out.passed = out.margin >= -sigma * out.std_error - 1e-12;
    return out;
}

} // namespace ousector
