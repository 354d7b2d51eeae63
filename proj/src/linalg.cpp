#include "ousector/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <sstream>

namespace ousector {

namespace {

void require_square(const Matrix& m, const char* who) {
    if (m.rows() != m.cols()) {
        std::ostringstream os;
        os << who << ": matrix must be square, got " << m.rows() << "x" << m.cols();
        throw DimensionError(os.str());
    }
}

void require_finite(const Matrix& m, const char* who) {
    if (!m.allFinite()) {
        throw ValidationError(std::string(who) + ": matrix has non-finite entries");
    }
}

} // namespace

double operator_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    return m.jacobiSvd().singularValues()(0);
}

double spectral_abscissa(const Matrix& m) {
    Eigen::EigenSolver<Matrix> es(m, /*computeEigenvectors=*/false);
    return es.eigenvalues().real().maxCoeff();
}

SpdMatrix SpdMatrix::from(Matrix m) {
    require_square(m, "SpdMatrix");
    require_finite(m, "SpdMatrix");
    const double scale = m.cwiseAbs().maxCoeff();
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (scale > 0.0 && asym > 1e-12 * scale) {
        std::ostringstream os;
        os << "SpdMatrix: matrix not symmetric (relative asymmetry " << asym / scale << ")";
        throw DefinitenessError(os.str());
    }
    m = 0.5 * (m + m.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    if (!(lo > 0.0)) {
        std::ostringstream os;
        os << "SpdMatrix: matrix not positive definite (min eigenvalue " << lo << ")";
        throw DefinitenessError(os.str());
    }
    return SpdMatrix(std::move(m));
}

Matrix SpdMatrix::inverse() const {
    Eigen::LLT<Matrix> llt(m_);
    if (llt.info() != Eigen::Success) {
        throw ConditioningError("SpdMatrix::inverse: Cholesky factorization failed");
    }
    Matrix inv = llt.solve(Matrix::Identity(m_.rows(), m_.cols()));
    if (!inv.allFinite()) {
        throw ConditioningError("SpdMatrix::inverse: non-finite inverse");
    }
    return 0.5 * (inv + inv.transpose()).eval();
}

StableMatrix StableMatrix::from(Matrix m) {
    require_square(m, "StableMatrix");
    require_finite(m, "StableMatrix");
    const double abscissa = spectral_abscissa(m);
    if (!(abscissa < -1e-12)) {
        std::ostringstream os;
        os << "StableMatrix: spectrum reaches Re z = " << abscissa
           << " (need Re z < -1e-12)";
        throw StabilityError(os.str());
    }
    return StableMatrix(std::move(m), -abscissa);
}

Matrix matrix_exp(const Matrix& m, double t) {
    require_square(m, "matrix_exp");
    if (!std::isfinite(t)) throw DomainError("matrix_exp: t must be finite");
    return (t * m).exp();
}

SpdMatrix solve_lyapunov(const StableMatrix& A, const SpdMatrix& Q) {
    const Eigen::Index n = A.dim();
    if (Q.dim() != n) {
        std::ostringstream os;
        os << "solve_lyapunov: dimension mismatch, A is " << n << "x" << n
           << " but Q is " << Q.dim() << "x" << Q.dim();
        throw DimensionError(os.str());
    }

    using CMatrix = Eigen::MatrixXcd;
    Eigen::ComplexSchur<Matrix> schur(A.get());
    const CMatrix& T = schur.matrixT();
    const CMatrix& U = schur.matrixU();

    // T Y + Y T^H = C with T upper triangular; columns solved from the
    // last one down, each a shifted triangular system.
    CMatrix C = -(U.adjoint() * Q.get() * U);
    CMatrix Y = CMatrix::Zero(n, n);
    for (Eigen::Index k = n - 1; k >= 0; --k) {
        Eigen::VectorXcd rhs = C.col(k);
        for (Eigen::Index j = k + 1; j < n; ++j) {
            rhs -= std::conj(T(k, j)) * Y.col(j);
        }
        CMatrix Tk = T;
        Tk.diagonal().array() += std::conj(T(k, k));
        Y.col(k) = Tk.triangularView<Eigen::Upper>().solve(rhs);
    }

    Matrix X = (U * Y * U.adjoint()).real();
    X = 0.5 * (X + X.transpose()).eval();

    const double qnorm = operator_norm(Q.get());
    const double res = operator_norm(A.get() * X + X * A.get().transpose() + Q.get());
    if (!(res <= 1e-10 * qnorm)) {
        std::ostringstream os;
        os << "solve_lyapunov: residual " << res << " exceeds 1e-10 * ||Q|| = "
           << 1e-10 * qnorm;
        throw ConditioningError(os.str());
    }
    return SpdMatrix::from(std::move(X));
}

namespace {

// Q_t for moderate t via the block exponential
// exp(t [[A, Q], [0, -A^T]]) = [[E11, E12], [0, E11^{-T}]],  Q_t = E12 E11^T.
Matrix sandwich_vanloan(const Matrix& A, const Matrix& Q, double t) {
    const Eigen::Index n = A.rows();
    Matrix blk = Matrix::Zero(2 * n, 2 * n);
    blk.topLeftCorner(n, n) = A;
    blk.topRightCorner(n, n) = Q;
    blk.bottomRightCorner(n, n) = -A.transpose();
    const Matrix E = (t * blk).exp();
    Matrix X = E.topRightCorner(n, n) * E.topLeftCorner(n, n).transpose();
    return 0.5 * (X + X.transpose()).eval();
}

} // namespace

SpdMatrix integrate_sandwich(const StableMatrix& A, const SpdMatrix& Q, double t) {
    const Eigen::Index n = A.dim();
    if (Q.dim() != n) {
        throw DimensionError("integrate_sandwich: dimension mismatch between A and Q");
    }
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw DomainError("integrate_sandwich: t must be positive and finite");
    }

    // The bottom-right block of the Van Loan exponential grows like
    // e^{t ||A||}; split t until the block exponential is well scaled,
    // then double with Q_{2s} = Q_s + e^{sA} Q_s e^{sA^T}.
    const double anorm = operator_norm(A.get());
    int doublings = 0;
    double s = t;
    while (s * anorm > 8.0 && doublings < 64) {
        s *= 0.5;
        ++doublings;
    }
    Matrix X = sandwich_vanloan(A.get(), Q.get(), s);
    Matrix F = matrix_exp(A.get(), s);
    for (int i = 0; i < doublings; ++i) {
        X = (X + F * X * F.transpose()).eval();
        X = 0.5 * (X + X.transpose()).eval();
        F = (F * F).eval();
    }
    return SpdMatrix::from(std::move(X));
}

SpdMatrix spd_sqrt(const SpdMatrix& S) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(S.get());
    if (es.info() != Eigen::Success) {
        throw ConditioningError("spd_sqrt: eigendecomposition failed");
    }
    const Vector roots = es.eigenvalues().cwiseSqrt();
    Matrix R = es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().transpose();
    R = 0.5 * (R + R.transpose()).eval();
    return SpdMatrix::from(std::move(R));
}

} // namespace ousector
