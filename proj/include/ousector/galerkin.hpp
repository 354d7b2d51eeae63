#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "ousector/model.hpp"
#include "ousector/polynomial.hpp"
#include "ousector/weight.hpp"

namespace ousector {

/// Finite-section (Galerkin) matrices of the generator in the Hermite
/// polynomial basis of total degree <= d built on y = Q_inf^{-1/2} x:
///   L[i][j] = int (L b_j) b_i dnu,   G[i][j] = int b_i b_j dnu.
/// With no weight the entries are exact Gaussian polynomial moments;
/// otherwise they are Monte Carlo estimates on a shared sample set.
struct GalerkinResult {
    Matrix L;
    Matrix G;
    std::vector<MultiIndex> basis;
    bool exact = false;
    std::int64_t n_samples = 0;
    std::uint64_t seed = 0;
};

GalerkinResult galerkin_matrix(const HGeometry& g, const WeightedMeasure& w,
                               int degree, std::int64_t n, std::uint64_t seed);

/// Boundary of the G-weighted field of values
/// { v* M v / v* G v : v != 0 } by rotation: for each angle the extreme
/// eigenvector of the Hermitian part of e^{i phi} G^{-1/2} M G^{-1/2}
/// yields one boundary point. Containment is checked against the sector
/// { z : |Im z| <= -c_theta Re z }.
struct FovReport {
    std::vector<std::complex<double>> boundary;
    double theta = 0.0;
    double c_theta = 0.0;
    bool contained = false;
    double worst_violation = 0.0;  // max over boundary of |Im| + c Re
};

FovReport field_of_values(const Matrix& M, const SpdMatrix& G, int resolution,
                          double c_theta, double tol);

} // namespace ousector
