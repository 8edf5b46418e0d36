#include "loopkahler/loop.hpp"

#include <cmath>
#include <stdexcept>

#include "loopkahler/pointwise.hpp"

namespace loopkahler {

LoopGrid::LoopGrid(int M, Measure measure, double offset)
    : M_(M), measure_(measure), offset_(offset) {
  if (M < 4) throw std::invalid_argument("LoopGrid needs M >= 4");
}

void require_valid_loop(const KahlerModel& m, const Loop& g) {
  if (g.size() != g.grid.size()) throw std::invalid_argument("loop node count mismatch");
  for (const ChartPoint& p : g.points) m.validate_point(p);
}

void require_aligned(const Loop& g, const LoopTangent& xi) {
  if (!(g.grid == xi.grid) || g.size() != xi.size()) {
    throw std::invalid_argument("loop/tangent grid mismatch");
  }
  for (int j = 0; j < g.size(); ++j) {
    if (!(xi.vectors[j].base == g.points[j])) {
      throw std::invalid_argument("tangent base misaligned with loop at node " + std::to_string(j));
    }
  }
}

void require_same_grid(const LoopTangent& xi, const LoopTangent& eta) {
  if (!(xi.grid == eta.grid) || xi.size() != eta.size()) {
    throw std::invalid_argument("tangent grid mismatch");
  }
}

LoopTangent make_tangent(const Loop& g, const std::vector<Vec>& components) {
  if (static_cast<int>(components.size()) != g.size()) {
    throw std::invalid_argument("component count mismatch");
  }
  LoopTangent xi;
  xi.grid = g.grid;
  xi.vectors.resize(g.size());
  for (int j = 0; j < g.size(); ++j) {
    xi.vectors[j].base = g.points[j];
    xi.vectors[j].components = components[j];
  }
  return xi;
}

LoopTangent make_constant_tangent(const Loop& g, const Vec& components) {
  return make_tangent(g, std::vector<Vec>(g.size(), components));
}

cplx loop_metric_H(const KahlerModel& m, const Loop& g, const LoopTangent& xi,
                   const LoopTangent& eta) {
  require_aligned(g, xi);
  require_aligned(g, eta);
  KahanSum<cplx> acc;
  for (int j = 0; j < g.size(); ++j) {
    acc.add(h_inner(m, xi.vectors[j], eta.vectors[j]));
  }
  return acc.value() * (g.grid.mass() / g.grid.size());
}

double loop_form_Omega(const KahlerModel& m, const Loop& g, const LoopTangent& xi,
                       const LoopTangent& eta) {
  return -loop_metric_H(m, g, xi, eta).imag();
}

std::vector<Vec> spectral_derivative(const LoopGrid& grid, const std::vector<Vec>& values) {
  const int M = grid.size();
  if (static_cast<int>(values.size()) != M) throw std::invalid_argument("sample count mismatch");
  const int n = static_cast<int>(values[0].size());
  // Direct DFT; loops are desk-scale so O(M²) is fine.
  std::vector<Vec> coeffs(M, Vec::Zero(n));
  for (int k = 0; k < M; ++k) {
    Vec acc = Vec::Zero(n);
    for (int j = 0; j < M; ++j) {
      const double ang = -kTwoPi * j * k / M;
      acc += values[j] * cplx(std::cos(ang), std::sin(ang));
    }
    coeffs[k] = acc / static_cast<double>(M);
  }
  std::vector<Vec> deriv(M, Vec::Zero(n));
  for (int j = 0; j < M; ++j) {
    Vec acc = Vec::Zero(n);
    for (int k = 0; k < M; ++k) {
      int kk = (k <= M / 2) ? k : k - M;
      if (2 * k == M) kk = 0;  // Nyquist mode has no well-defined derivative sign
      const double ang = kTwoPi * j * k / M;
      acc += coeffs[k] * cplx(0.0, static_cast<double>(kk)) * cplx(std::cos(ang), std::sin(ang));
    }
    deriv[j] = acc;
  }
  return deriv;
}

double sobolev_norm(const KahlerModel& m, const Loop& g, const LoopTangent& xi, int k) {
  require_aligned(g, xi);
  if (k < 0 || k > 1) throw std::invalid_argument("sobolev_norm supports k in {0, 1}");
  const double h0 = loop_metric_H(m, g, xi, xi).real();
  if (k == 0) return std::sqrt(std::max(h0, 0.0));

  const int M = g.size();
  for (int j = 0; j < M; ++j) {
    if (g.points[j].chart_id != g.points[0].chart_id) {
      throw std::domain_error("sobolev_norm k=1 needs a single-chart loop");
    }
  }
  std::vector<Vec> comp(M), pos(M);
  for (int j = 0; j < M; ++j) {
    comp[j] = xi.vectors[j].components;
    pos[j] = g.points[j].coords;
  }
  const std::vector<Vec> dcomp = spectral_derivative(g.grid, comp);
  const std::vector<Vec> dpos = spectral_derivative(g.grid, pos);

  KahanSum<double> acc;
  for (int j = 0; j < M; ++j) {
    Vec cov = dcomp[j];
    if (m.kahler_expected()) {
      cov += christoffel_contract(christoffels(m, g.points[j]), dpos[j],
                                  xi.vectors[j].components);
    }
    TangentVec t{g.points[j], cov};
    acc.add(h_inner(m, t, t).real());
  }
  const double h1 = acc.value() * (g.grid.mass() / M);
  return std::sqrt(std::max(h0 + h1, 0.0));
}

}  // namespace loopkahler
