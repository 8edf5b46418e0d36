#pragma once

#include <functional>

#include "loopkahler/loop.hpp"

namespace loopkahler {

/// A vector field on loop space: a rule assigning an aligned tangent to every
/// loop near the base loop, with an optional analytic directional derivative
/// of the chart components, (g, ν) ↦ dξ[ν] as a tangent along g.
class LoopVectorField {
 public:
  using Rule = std::function<LoopTangent(const Loop&)>;
  using Deriv = std::function<LoopTangent(const Loop&, const LoopTangent&)>;

  explicit LoopVectorField(Rule rule) : rule_(std::move(rule)) {}
  LoopVectorField(Rule rule, Deriv deriv) : rule_(std::move(rule)), deriv_(std::move(deriv)) {}

  LoopTangent operator()(const Loop& g) const { return rule_(g); }
  bool has_analytic_derivative() const { return static_cast<bool>(deriv_); }
  LoopTangent analytic_derivative(const Loop& g, const LoopTangent& dir) const;

 private:
  Rule rule_;
  Deriv deriv_;
};

/// A scalar functional on loop space, e.g. g ↦ Ω_g(ξ_g, η_g).
using ScalarLoopFunctional = std::function<cplx(const Loop&)>;

// Test-field library: analytic rules with exact derivative callbacks so every
// finite-difference value has a cross-check. All are expressed in the chart
// coordinates of the loop they are evaluated on.

/// ξ(g)_j = c (independent of g).
LoopVectorField constant_field(const Vec& c);
/// ξ(g)_j = c_j (per-node constants).
LoopVectorField constant_field(const std::vector<Vec>& per_node);
/// ξ(g)_j = A z_j + B conj(z_j) + c.
LoopVectorField linear_field(const Mat& A, const Mat& B, const Vec& c);
/// ξ(g)_j = e^{i k s_j} (A z_j + c).
LoopVectorField harmonic_field(int k, const Mat& A, const Vec& c);
/// Coordinate field ξ(g)_j = z_j.
LoopVectorField coordinate_field(int n);

/// Pointwise real-linear combination a·X + b·Y (derivative callbacks combine
/// when both fields carry one).
LoopVectorField field_lincomb(double a, const LoopVectorField& X, double b,
                              const LoopVectorField& Y);

}  // namespace loopkahler
