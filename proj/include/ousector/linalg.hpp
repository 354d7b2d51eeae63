#pragma once

#include <Eigen/Dense>

#include "ousector/errors.hpp"

namespace ousector {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Spectral (2-) norm.
double operator_norm(const Matrix& m);

/// max Re(lambda) over the spectrum of a square matrix.
double spectral_abscissa(const Matrix& m);

/// Symmetric positive definite matrix. Construction checks symmetry to
/// 1e-12 relative and positive definiteness (Cholesky).
class SpdMatrix {
public:
    static SpdMatrix from(Matrix m);

    const Matrix& get() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }

    /// Inverse through Cholesky; throws ConditioningError when the
    /// factorization degrades past recovery.
    Matrix inverse() const;

private:
    explicit SpdMatrix(Matrix m) : m_(std::move(m)) {}
    Matrix m_;
};

/// Square matrix with spectrum strictly inside {Re z < -1e-12}.
/// Borderline spectra are rejected: the stationary covariance diverges
/// as the gap closes.
class StableMatrix {
public:
    static StableMatrix from(Matrix m);

    const Matrix& get() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }

    /// Spectral gap: -max Re(lambda) > 0.
    double gap() const { return gap_; }

private:
    StableMatrix(Matrix m, double gap) : m_(std::move(m)), gap_(gap) {}
    Matrix m_;
    double gap_;
};

/// e^{tM} for square M (scaling-and-squaring Pade).
Matrix matrix_exp(const Matrix& m, double t);

/// Solves A X + X A^T = -Q for the stationary covariance
/// X = integral_0^inf e^{tA} Q e^{tA^T} dt, via complex Schur reduction
/// and triangular back-substitution. Result is SPD with residual
/// ||A X + X A^T + Q|| <= 1e-10 ||Q||.
SpdMatrix solve_lyapunov(const StableMatrix& A, const SpdMatrix& Q);

/// Q_t = integral_0^t e^{sA} Q e^{sA^T} ds, t > 0, computed from the
/// exponential of the block matrix [[A, Q], [0, -A^T]]; for stiff t*A
/// the interval is split and the semigroup identity
/// Q_{2t} = Q_t + e^{tA} Q_t e^{tA^T} doubles it back up.
SpdMatrix integrate_sandwich(const StableMatrix& A, const SpdMatrix& Q, double t);

/// Principal square root of an SPD matrix, R R = S to 1e-10 relative.
SpdMatrix spd_sqrt(const SpdMatrix& S);

} // namespace ousector
