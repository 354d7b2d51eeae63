#pragma once

#include <complex>

#include "ousector/linalg.hpp"

namespace ousector {

/// The model triple (A, Q, Q_inf) on R^n: stable drift A, SPD diffusion
/// Q, and the stationary covariance Q_inf solving
/// A Q_inf + Q_inf A^T + Q = 0. The invariant Gaussian measure mu_inf is
/// N(0, Q_inf).
struct OuModel {
    int dim = 0;
    StableMatrix A;
    SpdMatrix Q;
    SpdMatrix Q_inf;
};

OuModel build_model(StableMatrix A, SpdMatrix Q);

/// Cameron-Martin geometry of the model. H is R^n with Gram matrix
/// Q^{-1}, H_inf is R^n with Gram matrix Q_inf^{-1}; the embeddings
/// i* and i_inf* are the matrices Q and Q_inf. The drift operator
/// B = Q_inf A^T Q^{-1} satisfies B + B# = -Id, where B# = Q B^T Q^{-1}
/// is the H-adjoint; gamma = ||B - B#|| in the H operator norm.
struct HGeometry {
    OuModel model;

    Matrix gram_inv;      // Q^{-1}
    Matrix gram_inf_inv;  // Q_inf^{-1}
    Matrix B;             // Q_inf A^T Q^{-1}
    Matrix B_sharp;       // Q B^T Q^{-1}
    Matrix V;             // Q Q_inf^{-1}
    Matrix q_sqrt;        // Q^{1/2}
    Matrix q_sqrt_inv;    // Q^{-1/2}
    double gamma = 0.0;

    int dim() const { return model.dim; }

    /// [v, w]_H = v^T Q^{-1} w.
    double h_inner(const Vector& v, const Vector& w) const {
        return v.dot(gram_inv * w);
    }
    double h_norm(const Vector& v) const {
        return std::sqrt(h_inner(v, v));
    }

    /// Bilinear extension of the H-bracket to complex vectors: no
    /// conjugation inside; the dual function carries it.
    std::complex<double> h_inner_c(const Eigen::VectorXcd& v,
                                   const Eigen::VectorXcd& w) const {
        return v.transpose() * (gram_inv * w);
    }

    /// Operator norm of T as a map H -> H: ||Q^{-1/2} T Q^{1/2}||_2.
    double op_norm_h(const Matrix& T) const {
        return operator_norm(q_sqrt_inv * T * q_sqrt);
    }
};

/// Builds the geometry and asserts its algebraic invariants:
/// B + B# = -Id (entrywise, relative 1e-10), the identity
/// B Q x* = Q_inf A^T x* on sampled x*, and that the H-adjoint of
/// V = Q Q_inf^{-1} is the identity.
HGeometry h_geometry(const OuModel& m);

/// Angle of the sector of analyticity in L^p, p in (1, inf):
/// cot(theta_p) = sqrt((p-2)^2 + p^2 gamma^2) / (2 sqrt(p-1)).
struct SectorParams {
    double p = 2.0;
    double theta_p = 0.0;   // in (0, pi/2]
    double c_theta = 0.0;   // cot(theta_p)
};

SectorParams sector_params(const HGeometry& g, double p);

/// The constant c with |Q_inf A^T x*|_H <= c |Q x*|_H for all x*, i.e.
/// c = ||B||_{L(H)}; spot-verified on 100 random x*.
double rkhs_constant(const HGeometry& g);

} // namespace ousector
