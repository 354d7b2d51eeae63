#include "ousector/generator.hpp"

namespace ousector {

namespace {

// Bilinear dot product (no conjugation; Eigen::dot conjugates).
inline Cx bidot(const CVector& a, const CVector& b) {
    return (a.array() * b.array()).sum();
}

inline Cx bidot(const Vector& a, const CVector& b) {
    return (a.cast<Cx>().array() * b.array()).sum();
}

} // namespace

Vector d_h(const HGeometry& g, const CylinderFunction& f, const Point& x) {
    return g.model.Q.get() * f.gradient_r(x);
}

CVector d_h_c(const HGeometry& g, const CylinderFunction& f, const Point& x) {
    return g.model.Q.get() * f.gradient(x);
}

GeneratorTerm generator_terms(const HGeometry& g, const WeightFunction& U,
                              const CylinderFunction& f, const Point& x) {
    GeneratorTerm t;
    const CMatrix hess = f.hessian(x);
    const CVector grad = f.gradient(x);
    t.trace_part = 0.5 * (g.model.Q.get().cast<Cx>() * hess).trace();
    t.drift_part = bidot((g.model.A.get() * x).eval(), grad);
    // [B D_H f, D_H U]_H = (B Q grad f) . grad U; the Gram Q^{-1} cancels
    // against the Q in D_H U.
    const CVector bqgrad = (g.B * g.model.Q.get()).cast<Cx>() * grad;
    t.weight_part = bidot(U.gradient(x), bqgrad);
    return t;
}

Cx apply_generator(const HGeometry& g, const WeightFunction& U,
                   const CylinderFunction& f, const Point& x) {
    return generator_terms(g, U, f, x).total();
}

Cx apply_generator_adjoint(const HGeometry& g, const WeightFunction& U,
                           const CylinderFunction& f, const Point& x) {
    const CMatrix hess = f.hessian(x);
    const CVector grad = f.gradient(x);
    Cx out = 0.5 * (g.model.Q.get().cast<Cx>() * hess).trace();
    const Matrix drift_adj =
        g.model.Q_inf.get() * g.model.A.get().transpose() * g.gram_inf_inv;
    out += bidot((drift_adj * x).eval(), grad);
    const CVector bqgrad = (g.B_sharp * g.model.Q.get()).cast<Cx>() * grad;
    out += bidot(U.gradient(x), bqgrad);
    return out;
}

} // namespace ousector
