#pragma once

#include <vector>

#include "loopkahler/model.hpp"

namespace loopkahler {

/// Quadrature measure on S¹: normalized carries total mass 1 (ds/2π),
/// raw carries total mass 2π (plain ds).
enum class Measure { normalized, raw };

/// Uniform periodic grid s_j = 2πj/M + offset with equal weights.
class LoopGrid {
 public:
  explicit LoopGrid(int M, Measure measure = Measure::normalized, double offset = 0.0);

  int size() const { return M_; }
  Measure measure() const { return measure_; }
  double offset() const { return offset_; }
  double node(int j) const { return kTwoPi * j / M_ + offset_; }
  /// Total mass of the measure (1 or 2π).
  double mass() const { return measure_ == Measure::normalized ? 1.0 : kTwoPi; }
  /// Weight of a single node. Quadratures are computed as mass() times the
  /// plain node average so that switching measure rescales results exactly.
  double weight() const { return mass() / M_; }

  bool operator==(const LoopGrid& o) const {
    return M_ == o.M_ && measure_ == o.measure_ && offset_ == o.offset_;
  }

 private:
  int M_;
  Measure measure_;
  double offset_;
};

/// A discretized loop: one model point per grid node.
struct Loop {
  LoopGrid grid{4};
  std::vector<ChartPoint> points;

  int size() const { return static_cast<int>(points.size()); }
};

/// A tangent field along a Loop: one TangentVec per node, bases matching the
/// loop points exactly.
struct LoopTangent {
  LoopGrid grid{4};
  std::vector<TangentVec> vectors;

  int size() const { return static_cast<int>(vectors.size()); }
};

void require_valid_loop(const KahlerModel& m, const Loop& g);
void require_aligned(const Loop& g, const LoopTangent& xi);
void require_same_grid(const LoopTangent& xi, const LoopTangent& eta);

/// Builds the aligned tangent with given per-node components.
LoopTangent make_tangent(const Loop& g, const std::vector<Vec>& components);
/// Same components at every node.
LoopTangent make_constant_tangent(const Loop& g, const Vec& components);

/// Loop-space Hermitian metric: quadrature of h_inner over the grid.
/// Conjugate-symmetric; real and ≥ 0 on the diagonal.
cplx loop_metric_H(const KahlerModel& m, const Loop& g, const LoopTangent& xi,
                   const LoopTangent& eta);

/// Loop-space Kähler form Ω = −Im(H).
double loop_form_Omega(const KahlerModel& m, const Loop& g, const LoopTangent& xi,
                       const LoopTangent& eta);

/// Diagnostic Sobolev norm. k = 0 is sqrt(H(ξ,ξ)); k = 1 adds the quadrature
/// of h on the covariant s-derivative of ξ (spectral derivative of the
/// components plus Christoffel correction). k > 1 unsupported.
double sobolev_norm(const KahlerModel& m, const Loop& g, const LoopTangent& xi, int k);

/// Spectral (trigonometric interpolation) derivative of periodic samples.
std::vector<Vec> spectral_derivative(const LoopGrid& grid, const std::vector<Vec>& values);

}  // namespace loopkahler
