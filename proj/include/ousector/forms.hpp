#pragma once

#include <cstdint>
#include <vector>

#include "ousector/check.hpp"
#include "ousector/cylinder.hpp"
#include "ousector/measure.hpp"
#include "ousector/model.hpp"
#include "ousector/weight.hpp"

namespace ousector {

/// Value of the nonsymmetric form with its Monte Carlo error.
struct FormValue {
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t n_samples = 0;
    std::uint64_t seed = 0;
};

/// E(u, v) = -int [B D_H u, D_H v]_H dnu; with `adjoint` the bracket
/// uses the H-adjoint B#, giving the dual form.
FormValue dirichlet_form(const HGeometry& g, const WeightedMeasure& w,
                         const CylinderFunction& u, const CylinderFunction& v,
                         bool adjoint, std::int64_t n, std::uint64_t seed);

/// Pointwise coercivity: -[B D_H u, D_H u]_H = |D_H u|_H^2 / 2 at every
/// sample, residual <= 1e-10 relative. Exact algebra, not statistics.
CheckReport check_coercivity(const HGeometry& g, const WeightedMeasure& w,
                             const CylinderFunction& u, std::int64_t n,
                             std::uint64_t seed, double tol = 1e-10);

/// |E(u,v)| <= ||B||_{L(H)} ||D_H u||_{L^2(nu)} ||D_H v||_{L^2(nu)},
/// all three factors estimated on the same samples.
CheckReport check_sector_condition(const HGeometry& g, const WeightedMeasure& w,
                                   const CylinderFunction& u,
                                   const CylinderFunction& v, std::int64_t n,
                                   std::uint64_t seed, double sigma = 3.0);

/// E(u, v) = -int (L u) v dnu on shared samples; with `adjoint` also
/// verifies the dual pairing int (L~ u) v dnu = int u (L v) dnu.
std::vector<CheckReport> check_generator_duality(const HGeometry& g,
                                                 const WeightedMeasure& w,
                                                 const CylinderFunction& u,
                                                 const CylinderFunction& v,
                                                 bool adjoint, std::int64_t n,
                                                 std::uint64_t seed,
                                                 double sigma = 3.0);

/// Dirichlet-operator inequality int (L u)(u-1)^+ dnu <= 0, estimated
/// through the form-side surrogate int_{u>1} [B D_H u, D_H u]_H dnu
/// whose integrand is pointwise nonpositive. Samples with u within
/// 1e-12 of 1 are excluded.
CheckReport check_dirichlet_operator(const HGeometry& g, const WeightedMeasure& w,
                                     const CylinderFunction& u, std::int64_t n,
                                     std::uint64_t seed, double sigma = 3.0);

} // namespace ousector
