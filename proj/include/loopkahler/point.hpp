#pragma once

#include <stdexcept>

#include "loopkahler/types.hpp"

namespace loopkahler {

/// A point of a chart model: chart index plus complex coordinates in that chart.
struct ChartPoint {
  int chart_id = 0;
  Vec coords;

  int dim() const { return static_cast<int>(coords.size()); }

  bool operator==(const ChartPoint& o) const {
    return chart_id == o.chart_id && coords.size() == o.coords.size() && coords == o.coords;
  }
};

/// Tangent vector at a ChartPoint, components on the chart frame dz_i.
struct TangentVec {
  ChartPoint base;
  Vec components;

  int dim() const { return static_cast<int>(components.size()); }
};

inline bool all_finite(const Vec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) return false;
  }
  return true;
}

inline void require_same_base(const TangentVec& u, const TangentVec& v) {
  if (!(u.base == v.base)) {
    throw std::invalid_argument("tangent vectors have different base points");
  }
}

}  // namespace loopkahler
