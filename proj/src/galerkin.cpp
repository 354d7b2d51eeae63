#include "ousector/galerkin.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

#include "ousector/measure.hpp"

namespace ousector {

namespace {

struct BasisFunction {
    Polynomial value;
    std::vector<Polynomial> grad;
    Polynomial generator_nograd;  // Tr(Q Hess)/2 + (A x) . grad, symbolic
};

std::vector<BasisFunction> build_basis(const HGeometry& g,
                                       const std::vector<MultiIndex>& idx) {
    const int n = g.dim();
    const Matrix S = SpdMatrix::from(spd_sqrt(g.model.Q_inf).get()).inverse();
    const Matrix& Q = g.model.Q.get();
    const Matrix& A = g.model.A.get();

    std::vector<BasisFunction> basis;
    basis.reserve(idx.size());
    for (const MultiIndex& alpha : idx) {
        Polynomial in_y(n, 1.0);
        for (int i = 0; i < n; ++i) {
            if (alpha[i] > 0) in_y = in_y * normalized_hermite(n, i, alpha[i]);
        }
        BasisFunction b{in_y.substitute_linear(S), {}, Polynomial(n)};
        b.grad.reserve(n);
        for (int i = 0; i < n; ++i) b.grad.push_back(b.value.derivative(i));

        Polynomial lp(n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (Q(i, j) != 0.0) lp += b.grad[i].derivative(j) * (0.5 * Q(i, j));
                if (A(i, j) != 0.0) {
                    lp += b.grad[i] * Polynomial::variable(n, j) * A(i, j);
                }
            }
        }
        lp.drop_small();
        b.generator_nograd = std::move(lp);
        basis.push_back(std::move(b));
    }
    return basis;
}

} // namespace

GalerkinResult galerkin_matrix(const HGeometry& g, const WeightedMeasure& w,
                               int degree, std::int64_t n, std::uint64_t seed) {
    if (degree < 1) throw DomainError("galerkin_matrix: degree must be >= 1");
    const int dim = g.dim();
    const std::vector<MultiIndex> idx = multi_indices_up_to(dim, degree);
    const std::vector<BasisFunction> basis = build_basis(g, idx);
    const int m = static_cast<int>(basis.size());

    GalerkinResult out;
    out.basis = idx;
    out.L = Matrix::Zero(m, m);
    out.G = Matrix::Zero(m, m);
    out.seed = seed;

    if (w.U.is_zero()) {
        out.exact = true;
        const Matrix& cov = w.model.Q_inf.get();
        for (int j = 0; j < m; ++j) {
            for (int i = 0; i < m; ++i) {
                out.L(i, j) =
                    gaussian_expectation(basis[j].generator_nograd * basis[i].value, cov);
                if (i <= j) {
                    const double gij =
                        gaussian_expectation(basis[i].value * basis[j].value, cov);
                    out.G(i, j) = gij;
                    out.G(j, i) = gij;
                }
            }
        }
    } else {
        const Matrix BQ = g.B * w.model.Q.get();
        GaussianSampler sampler(w.model, seed);
        out.n_samples = n;
        for (std::int64_t s = 0; s < n; ++s) {
            const Point x = sampler(s);
            const double density = w.U.density(x);
            const Vector du = w.U.gradient(x);
            Vector vals(m), lvals(m);
            for (int j = 0; j < m; ++j) {
                vals(j) = basis[j].value.eval(x);
                Vector grad(dim);
                for (int i = 0; i < dim; ++i) grad(i) = basis[j].grad[i].eval(x);
                lvals(j) = basis[j].generator_nograd.eval(x) + (BQ * grad).dot(du);
            }
            out.L += density * (vals * lvals.transpose());
            out.G += density * (vals * vals.transpose());
        }
        out.L /= static_cast<double>(n);
        out.G /= static_cast<double>(n);
        out.G = 0.5 * (out.G + out.G.transpose()).eval();
    }

    Eigen::SelfAdjointEigenSolver<Matrix> es(out.G, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    if (!(lo > 1e-8)) {
        throw ConditioningError(
            "galerkin_matrix: Gram matrix not positive definite enough "
            "(min eigenvalue " + std::to_string(lo) +
            "); reduce the degree or raise the sample count");
    }
    return out;
}

FovReport field_of_values(const Matrix& M, const SpdMatrix& G, int resolution,
                          double c_theta, double tol) {
    if (M.rows() != M.cols() || M.rows() != G.dim()) {
        throw DimensionError("field_of_values: M and G dimensions disagree");
    }
    if (resolution < 4) throw DomainError("field_of_values: resolution too small");

    const Matrix g_isqrt = SpdMatrix::from(spd_sqrt(G).get()).inverse();
    const Eigen::MatrixXcd W = (g_isqrt * M * g_isqrt).cast<std::complex<double>>();
    const Eigen::Index n = W.rows();

    FovReport out;
    out.c_theta = c_theta;
    out.theta = std::numbers::pi / 2.0 - std::atan(c_theta);
    out.boundary.reserve(resolution);

    for (int k = 0; k < resolution; ++k) {
        const double phi = 2.0 * std::numbers::pi * k / resolution;
        const std::complex<double> rot(std::cos(phi), std::sin(phi));
        const Eigen::MatrixXcd H = 0.5 * (rot * W + std::conj(rot) * W.adjoint());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
        const Eigen::VectorXcd v = es.eigenvectors().col(n - 1);
        const std::complex<double> z = (v.adjoint() * W * v).eval()(0, 0);
        out.boundary.push_back(z);
    }

    double worst = -1e300;
    for (const auto& z : out.boundary) {
        worst = std::max(worst, std::abs(z.imag()) + c_theta * z.real());
    }
    out.worst_violation = worst;
    out.contained = worst <= tol;
    return out;
}

} // namespace ousector
