#pragma once

#include "ousector/cylinder.hpp"
#include "ousector/model.hpp"
#include "ousector/weight.hpp"

namespace ousector {

/// H-gradient in its X-representation: D_H f(x) = Q grad f(x).
Vector d_h(const HGeometry& g, const CylinderFunction& f, const Point& x);
CVector d_h_c(const HGeometry& g, const CylinderFunction& f, const Point& x);

/// The three summands of the generator at a point:
///   L f = Tr(Q Hess f)/2 + (A x) . grad f + [B D_H f, D_H U]_H.
struct GeneratorTerm {
    Cx trace_part{0.0, 0.0};
    Cx drift_part{0.0, 0.0};
    Cx weight_part{0.0, 0.0};
    Cx total() const { return trace_part + drift_part + weight_part; }
};

GeneratorTerm generator_terms(const HGeometry& g, const WeightFunction& U,
                              const CylinderFunction& f, const Point& x);

Cx apply_generator(const HGeometry& g, const WeightFunction& U,
                   const CylinderFunction& f, const Point& x);

/// Generator of the adjoint form (B replaced by its H-adjoint): the
/// drift becomes Q_inf A^T Q_inf^{-1} x and the weight bracket uses B#.
Cx apply_generator_adjoint(const HGeometry& g, const WeightFunction& U,
                           const CylinderFunction& f, const Point& x);

} // namespace ousector
