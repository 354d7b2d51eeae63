#pragma once

#include <cstdint>
#include <vector>

#include "ousector/check.hpp"
#include "ousector/cylinder.hpp"
#include "ousector/measure.hpp"
#include "ousector/model.hpp"
#include "ousector/weight.hpp"

namespace ousector {

/// Duality map f* = conj(f) |f|^{p-2}, with f*(x) = 0 where f(x) = 0;
/// well defined for every p in (1, inf).
Cx dual_function(const CylinderFunction& f, double p, const Point& x);

/// Gradient of the duality map (X-space):
/// grad f* = |f|^{p-2} conj(grad f) + (p-2) |f|^{p-4} conj(f) Re(conj(f) grad f).
CVector dual_gradient(const CylinderFunction& f, double p, const Point& x);

/// Pointwise identities behind the numerical-range bound, evaluated at
/// one point with the bilinear H-bracket (the dual function carries the
/// conjugation). With F_r = Re(conj(f) D_H f), F_i = Im(conj(f) D_H f),
/// a = |F_r|_H, b = |F_i|_H:
///   (i)  -Re[B D_H f, D_H f*]_H = |f|^{p-4}((p-1)a^2 + b^2)/2,
///        and the same with B replaced by its H-adjoint;
///   (ii) Im[B D_H f, D_H f*]_H
///           = p |f|^{p-4} [(B + Id/p) F_i, F_r]_H;
///   (iii) |Im[B D_H f, D_H f*]_H| <= -C_theta_p Re[B D_H f, D_H f*]_H.
/// Points with |f(x)| below 1e-12 are skipped (reported as such).
std::vector<CheckReport> check_pointwise_identities(const HGeometry& g,
                                                    const CylinderFunction& f,
                                                    double p, const Point& x,
                                                    double tol = 1e-9);

/// One numerical-range sample: the MC estimate of
/// int [B D_H f, D_H f*]_H dnu (the form side of <L f, f*>), its real
/// and imaginary parts, and the sector margin -C_theta Re - |Im|.
struct RangeSample {
    Cx value{0.0, 0.0};
    double re = 0.0;
    double im = 0.0;
    double margin = 0.0;
    double std_error = 0.0;
    double c_theta = 0.0;
    std::int64_t n_samples = 0;
    std::int64_t excluded = 0;
    std::uint64_t seed = 0;
    bool passed = false;
};

RangeSample check_numerical_range(const HGeometry& g, const WeightedMeasure& w,
                                  const CylinderFunction& f, double p,
                                  std::int64_t n, std::uint64_t seed,
                                  double sigma = 3.0);

} // namespace ousector
