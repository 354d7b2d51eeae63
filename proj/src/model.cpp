#include "ousector/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "ousector/rng.hpp"

namespace ousector {

OuModel build_model(StableMatrix A, SpdMatrix Q) {
    if (A.dim() != Q.dim()) {
        std::ostringstream os;
        os << "build_model: A is " << A.dim() << "-dimensional but Q is "
           << Q.dim() << "-dimensional";
        throw DimensionError(os.str());
    }
    SpdMatrix q_inf = solve_lyapunov(A, Q);
    const int n = static_cast<int>(A.dim());
    return OuModel{n, std::move(A), std::move(Q), std::move(q_inf)};
}

HGeometry h_geometry(const OuModel& m) {
    HGeometry g{m, {}, {}, {}, {}, {}, {}, {}, 0.0};
    g.gram_inv = m.Q.inverse();
    g.gram_inf_inv = m.Q_inf.inverse();
    g.B = m.Q_inf.get() * m.A.get().transpose() * g.gram_inv;
    g.B_sharp = m.Q.get() * g.B.transpose() * g.gram_inv;
    g.V = m.Q.get() * g.gram_inf_inv;
    g.q_sqrt = spd_sqrt(m.Q).get();
    g.q_sqrt_inv = SpdMatrix::from(g.q_sqrt).inverse();
    g.gamma = g.op_norm_h(g.B - g.B_sharp);

    const int n = m.dim;
    const Matrix id = Matrix::Identity(n, n);
    const double b_scale = std::max(1.0, g.B.cwiseAbs().maxCoeff());

    const double drift_res = (g.B + g.B_sharp + id).cwiseAbs().maxCoeff();
    if (!(drift_res <= 1e-10 * b_scale)) {
        std::ostringstream os;
        os << "h_geometry: B + B# + Id residual " << drift_res
           << " exceeds 1e-10 (scale " << b_scale << ")";
        throw ValidationError(os.str());
    }

    // B Q x* = Q_inf A^T x* for sampled x*, and the H-adjoint of V is
    // the identity; both are consequences of the construction and guard
    // against conditioning loss in the inversions.
    NormalStream ns(derive_seed(0x6f75736563746f72ULL, 17));
    for (int trial = 0; trial < 8; ++trial) {
        Vector xs(n);
        for (int i = 0; i < n; ++i) xs(i) = ns.next();
        const Vector lhs = g.B * (m.Q.get() * xs);
        const Vector rhs = m.Q_inf.get() * (m.A.get().transpose() * xs);
        const double scale = std::max(1.0, rhs.cwiseAbs().maxCoeff());
        if (!((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-9 * scale)) {
            throw ValidationError("h_geometry: B i* x* != i_inf* A* x* on sampled x*");
        }
    }
    const Matrix v_adj_h = m.Q_inf.get() * g.V.transpose() * g.gram_inv;
    if (!((v_adj_h - id).cwiseAbs().maxCoeff() <= 1e-9)) {
        throw ValidationError("h_geometry: H-adjoint of V is not the identity");
    }
    return g;
}

SectorParams sector_params(const HGeometry& g, double p) {
    if (!(p > 1.0) || !std::isfinite(p)) {
        std::ostringstream os;
        os << "sector_params: p must lie in (1, inf), got " << p;
        throw DomainError(os.str());
    }
    SectorParams s;
    s.p = p;
    s.c_theta = std::sqrt((p - 2.0) * (p - 2.0) + p * p * g.gamma * g.gamma) /
                (2.0 * std::sqrt(p - 1.0));
    s.theta_p = std::numbers::pi / 2.0 - std::atan(s.c_theta);
    return s;
}

double rkhs_constant(const HGeometry& g) {
    const double c = g.op_norm_h(g.B);
    const int n = g.dim();
    NormalStream ns(derive_seed(0x726b6873ULL, 1));
    for (int trial = 0; trial < 100; ++trial) {
        Vector xs(n);
        for (int i = 0; i < n; ++i) xs(i) = ns.next();
        const double lhs = g.h_norm(g.model.Q_inf.get() * (g.model.A.get().transpose() * xs));
        const double rhs = c * g.h_norm(g.model.Q.get() * xs);
        if (!(lhs <= rhs * (1.0 + 1e-9) + 1e-12)) {
            throw ValidationError("rkhs_constant: |i_inf* A* x*|_H > c |i* x*|_H on a sample");
        }
    }
    return c;
}

} // namespace ousector
