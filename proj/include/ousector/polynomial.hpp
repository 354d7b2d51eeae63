#pragma once

#include <map>
#include <vector>

#include <Eigen/Dense>

#include "ousector/errors.hpp"

namespace ousector {

using MultiIndex = std::vector<int>;

/// Dense-coefficient multivariate polynomial over R^n, stored as a map
/// from exponent multi-indices to coefficients. Degrees stay tiny here
/// (Galerkin bases and their generator images), so the map is fine.
class Polynomial {
public:
    explicit Polynomial(int dim) : dim_(dim) {}
    Polynomial(int dim, double constant);

    static Polynomial monomial(int dim, const MultiIndex& alpha, double coeff);
    static Polynomial variable(int dim, int i);

    int dim() const { return dim_; }
    const std::map<MultiIndex, double>& terms() const { return terms_; }
    int total_degree() const;

    double eval(const Eigen::VectorXd& x) const;

    Polynomial& operator+=(const Polynomial& other);
    Polynomial& operator*=(double s);
    Polynomial operator+(const Polynomial& other) const;
    Polynomial operator*(const Polynomial& other) const;
    Polynomial operator*(double s) const;
    Polynomial operator-(const Polynomial& other) const;

    /// d/dx_i.
    Polynomial derivative(int i) const;

    /// p(S x) for a linear substitution y = S x.
    Polynomial substitute_linear(const Eigen::MatrixXd& S) const;

    void drop_small(double tol = 1e-14);

private:
    int dim_;
    std::map<MultiIndex, double> terms_;
};

/// E[p(X)] for X ~ N(0, cov), exact up to rounding (Stein recursion on
/// monomial moments, memoized per call).
double gaussian_expectation(const Polynomial& p, const Eigen::MatrixXd& cov);

/// Probabilists' Hermite polynomial He_k in variable i of an
/// n-dimensional space, normalized to unit L^2(N(0,1)) norm.
Polynomial normalized_hermite(int dim, int i, int k);

/// All multi-indices in n variables with total degree <= d, graded
/// lexicographic order (constant first).
std::vector<MultiIndex> multi_indices_up_to(int dim, int degree);

} // namespace ousector
