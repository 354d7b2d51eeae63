#pragma once

#include <cstdint>
#include <vector>

#include "ousector/check.hpp"
#include "ousector/linalg.hpp"

namespace ousector {

/// N-mode spectral truncation of the Dirichlet-Laplacian drift with the
/// Brownian min-kernel diffusion on L^2(0,1): basis
/// e_k(x) = sqrt(2) sin(k pi x), drift eigenvalues -k^2 pi^2, and the
/// Gram matrix q_jk = <Q e_j, e_k> of the kernel min(x, y).
struct SpectralTruncation {
    int modes = 0;
    Vector drift_eigenvalues;  // -k^2 pi^2
    Matrix q;                  // N x N, SPD
};

/// Assembles the truncation. Entries come from 2D Gauss-Legendre
/// quadrature split along the kink of min(x, y) and are cross-checked
/// against the closed-form expansion
/// q_jk = delta_jk/(k^2 pi^2) + 2 (-1)^{j+k}/(j k pi^2).
SpectralTruncation assemble_truncation(int modes);

/// Stationary covariance of the truncated system via the Lyapunov
/// solve. When `checks` is given, appends comparisons against the
/// published series for the entries and both variants of the published
/// trace formula (the trace display carries a sqrt(2) bookkeeping slip;
/// comparisons are reported, not asserted).
SpdMatrix wiener_q_infty(const SpectralTruncation& trunc,
                         std::vector<CheckReport>* checks = nullptr);

/// Diagonal of the mode-space Q_t at time t predicted by the series,
/// (3/2)(1 - e^{-2 k^2 pi^2 t})/(k^4 pi^4); used as the oracle target.
double wiener_qt_diagonal_series(int k, double t);

/// Nystrom (trapezoid) eigenvalues of the integral operator with kernel
/// min(x, y) on (0,1), descending; the analytic values are
/// lambda_k = ((k - 1/2) pi)^{-2}.
std::vector<double> classical_eigen(int grid_points);

/// Full pipeline on the truncation with the quadratic weight
/// U(c) = |c|^2 in mode coordinates: geometry and drift-operator
/// algebra, sector parameters, form and duality checks, weighted
/// integration by parts, and numerical-range margins for each p.
std::vector<CheckReport> wiener_sector_pipeline(int modes,
                                                const std::vector<double>& p_list,
                                                std::int64_t n, std::uint64_t seed);

} // namespace ousector
