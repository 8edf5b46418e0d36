#pragma once

#include <stdexcept>

#include "loopkahler/fields.hpp"

namespace loopkahler {

/// Raised when a finite-difference derivative does not show second-order
/// convergence; carries both Richardson estimates.
class FdConvergenceError : public std::runtime_error {
 public:
  FdConvergenceError(cplx coarse, cplx fine, double observed_order);
  cplx coarse;
  cplx fine;
  double observed_order;
};

/// Affine perturbation of a loop in chart coordinates: node j gets
/// g_j + t ν_j. A node whose result leaves the atlas safe region is
/// re-expressed in its preferred chart.
Loop perturb_loop(const KahlerModel& m, const Loop& g, const LoopTangent& nu, double t);

/// Directional derivative of a scalar functional along ν at g: Richardson-
/// extrapolated central differences with step 1e-4·(1 + max coordinate),
/// gated by an observed-convergence-order check (≥ 1.9).
cplx directional_derivative(const KahlerModel& m, const ScalarLoopFunctional& F, const Loop& g,
                            const LoopTangent& nu);

/// Node-wise derivative of the field components along dir: analytic callback
/// when the field has one, otherwise central finite differences with the
/// wider nested step 1e-3 (documented accuracy 1e-4).
LoopTangent field_derivative(const KahlerModel& m, const LoopVectorField& X, const Loop& g,
                             const LoopTangent& dir);

/// Lie bracket [X,Y](g) = dY[X(g)] − dX[Y(g)], node-wise.
LoopTangent lie_bracket(const KahlerModel& m, const LoopVectorField& X, const LoopVectorField& Y,
                        const Loop& g);

/// Six-term exterior derivative of Ω on three vector fields:
/// ξ(Ω(η,ν)) − η(Ω(ξ,ν)) + ν(Ω(ξ,η)) − Ω([ξ,η],ν) − Ω([η,ν],ξ) + Ω([ξ,ν],η).
double dOmega_six_term(const KahlerModel& m, const LoopVectorField& xi, const LoopVectorField& eta,
                       const LoopVectorField& nu, const Loop& g);

/// Right-hand side of the main identity: quadrature over the grid of the
/// pointwise dω on the field values.
double integral_of_domega(const KahlerModel& m, const LoopVectorField& xi,
                          const LoopVectorField& eta, const LoopVectorField& nu, const Loop& g);

/// Analytic chart-level derivative of the integrand s ↦ ω_{g(s)}(ξ_g(s), η_g(s))
/// along ν at one node: the A + B − C expansion from the metric derivatives,
/// field values and analytic field derivatives. Perturbations act affinely in
/// chart coordinates, so the chart-Hessian terms vanish identically here.
/// Requires analytic derivative callbacks on both fields.
cplx integrand_chart_derivative(const KahlerModel& m, const Loop& g, const LoopVectorField& xi,
                                const LoopVectorField& eta, const LoopTangent& nu, int node);

/// Derivative of the metric matrix along a real tangent direction:
/// Σ_k ∂h/∂z_k ν_k + ∂h/∂z̄_k conj(ν_k). Exposed for the product-rule tests.
Mat metric_derivative_along(const KahlerModel& m, const ChartPoint& z, const Vec& nu);

/// Evaluation map T_s(g) = g(s) at a grid node (by index, or by the exact
/// node coordinate; off-grid values are refused — no interpolation).
ChartPoint evaluation_map(const Loop& g, int node);
ChartPoint evaluation_map(const Loop& g, double s);
/// Its differential: d T_s[ν] = ν(s).
TangentVec evaluation_differential(const LoopTangent& nu, int node);

}  // namespace loopkahler
