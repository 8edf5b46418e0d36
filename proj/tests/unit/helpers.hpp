#pragma once

#include <random>

#include "loopkahler/pointwise.hpp"

namespace lktest {

using namespace loopkahler;

inline ChartPoint pt(std::initializer_list<cplx> coords, int chart = 0) {
  Vec v(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (const cplx& c : coords) v[i++] = c;
  return ChartPoint{chart, v};
}

inline TangentVec tv(const ChartPoint& base, std::initializer_list<cplx> comps) {
  Vec v(static_cast<Eigen::Index>(comps.size()));
  Eigen::Index i = 0;
  for (const cplx& c : comps) v[i++] = c;
  return TangentVec{base, v};
}

inline Vec rand_cvec(int n, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = cplx(u(rng), u(rng));
  return v;
}

inline ChartPoint rand_point(int n, std::mt19937_64& rng, double radius = 0.8) {
  return ChartPoint{0, rand_cvec(n, rng, radius)};
}

// Stokes-cell finite-difference oracle for dω: flux of ω through the boundary
// of the small parallelepiped spanned by εu, εv, εw centered at z, divided by
// the cell volume factor. Independent of the metric-derivative path.
inline double stokes_cell_domega(const KahlerModel& m, const ChartPoint& z, const Vec& u,
                                 const Vec& v, const Vec& w, double eps = 1e-3) {
  const auto omega_at = [&](const Vec& shift, const Vec& a, const Vec& b) {
    ChartPoint p = z;
    p.coords += shift;
    return omega_eval(m, TangentVec{p, a}, TangentVec{p, b});
  };
  const auto face_pair = [&](const Vec& n1, const Vec& a, const Vec& b) {
    return omega_at(0.5 * eps * n1, a, b) - omega_at(-0.5 * eps * n1, a, b);
  };
  return (face_pair(u, v, w) + face_pair(v, w, u) + face_pair(w, u, v)) / eps;
}

}  // namespace lktest
