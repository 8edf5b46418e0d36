#pragma once

#include "loopkahler/calculus.hpp"

namespace loopkahler {

/// Raised when a geodesic boundary value problem has antipodal endpoints
/// (infinitely many minimizers on ℙⁿ); carries the offending loop nodes when
/// detected during assembly.
class AntipodalError : public std::domain_error {
 public:
  explicit AntipodalError(std::vector<int> nodes);
  std::vector<int> nodes;
};

/// Per-leaf connection on loop space: node-wise
/// (∇̃_ν ξ)(s_j) = dξ[ν](s_j) + Γ(g(s_j))(ν(s_j), ξ(s_j)).
/// Tensorial in ν; Leibniz in ξ. Kähler models only.
LoopTangent covariant_derivative_loop(const KahlerModel& m, const Loop& g, const LoopTangent& nu,
                                      const LoopVectorField& xi);

/// |ν(H(ξ,η)) − H(∇̃_ν ξ, η) − H(ξ, ∇̃_ν η)| at g.
double check_metric_compatibility(const KahlerModel& m, const Loop& g, const LoopVectorField& xi,
                                  const LoopVectorField& eta, const LoopVectorField& nu);

/// Node-wise max h-norm of ∇̃_ξ η − ∇̃_η ξ − [ξ, η] at g.
double check_torsion_free(const KahlerModel& m, const Loop& g, const LoopVectorField& xi,
                          const LoopVectorField& eta);

/// A one-parameter family of loops over t ∈ [0,1] on a shared grid.
struct LoopPath {
  std::vector<double> times;
  std::vector<Loop> loops;

  int steps() const { return static_cast<int>(times.size()) - 1; }
};

void validate_path(const KahlerModel& m, const LoopPath& path);

/// Discrete constant-speed geodesic from p to q with `steps` uniform time
/// intervals. Projective models use the great-circle closed form through
/// phase-aligned unit representatives as the initializer, other Kähler models
/// a Broyden shooting solve; both are then polished by Newton iteration on
/// the discrete geodesic equations so the assembled residual is solver-level
/// rather than truncation-level.
std::vector<ChartPoint> leaf_geodesic(const KahlerModel& m, const ChartPoint& p,
                                      const ChartPoint& q, int steps);

/// Per-leaf geodesic assembly: leaf j joins f(s_j) to g(s_j).
LoopPath assemble_loop_geodesic(const KahlerModel& m, const Loop& f, const Loop& g, int P);

/// Discrete geodesic-equation residual of one leaf at interior time index i,
/// expressed in the chart of the middle point:
/// D²_t γ(t_i) + Γ(γ(t_i))(D_t γ, D_t γ).
Vec leaf_residual_vec(const KahlerModel& m, const std::vector<ChartPoint>& leaf,
                      const std::vector<double>& times, int i);

/// max over nodes and interior times of the h-norm of the leaf residual.
double geodesic_residual(const KahlerModel& m, const LoopPath& path);

/// L(γ) = ∫₀¹ sqrt(H(D_tγ, D_tγ)) dt, composite trapezoid in t with centered
/// differences at interior times and one-sided ones at the endpoints.
double path_length(const KahlerModel& m, const LoopPath& path);

/// Same without the square root.
double path_energy(const KahlerModel& m, const LoopPath& path);

}  // namespace loopkahler
