#include "loopkahler/fields.hpp"

#include <stdexcept>

namespace loopkahler {

LoopTangent LoopVectorField::analytic_derivative(const Loop& g, const LoopTangent& dir) const {
  if (!deriv_) throw std::invalid_argument("field has no analytic derivative callback");
  return deriv_(g, dir);
}

LoopVectorField constant_field(const Vec& c) {
  return LoopVectorField(
      [c](const Loop& g) { return make_constant_tangent(g, c); },
      [c](const Loop& g, const LoopTangent&) {
        return make_constant_tangent(g, Vec::Zero(c.size()));
      });
}

LoopVectorField constant_field(const std::vector<Vec>& per_node) {
  const Eigen::Index n = per_node.empty() ? 0 : per_node[0].size();
  return LoopVectorField(
      [per_node](const Loop& g) { return make_tangent(g, per_node); },
      [per_node, n](const Loop& g, const LoopTangent&) {
        return make_constant_tangent(g, Vec::Zero(n));
      });
}

LoopVectorField linear_field(const Mat& A, const Mat& B, const Vec& c) {
  return LoopVectorField(
      [A, B, c](const Loop& g) {
        std::vector<Vec> comp(g.size());
        for (int j = 0; j < g.size(); ++j) {
          comp[j] = A * g.points[j].coords + B * g.points[j].coords.conjugate() + c;
        }
        return make_tangent(g, comp);
      },
      [A, B](const Loop& g, const LoopTangent& dir) {
        std::vector<Vec> comp(g.size());
        for (int j = 0; j < g.size(); ++j) {
          comp[j] = A * dir.vectors[j].components + B * dir.vectors[j].components.conjugate();
        }
        return make_tangent(g, comp);
      });
}

LoopVectorField harmonic_field(int k, const Mat& A, const Vec& c) {
  return LoopVectorField(
      [k, A, c](const Loop& g) {
        std::vector<Vec> comp(g.size());
        for (int j = 0; j < g.size(); ++j) {
          const double s = g.grid.node(j);
          comp[j] = cplx(std::cos(k * s), std::sin(k * s)) * (A * g.points[j].coords + c);
        }
        return make_tangent(g, comp);
      },
      [k, A](const Loop& g, const LoopTangent& dir) {
        std::vector<Vec> comp(g.size());
        for (int j = 0; j < g.size(); ++j) {
          const double s = g.grid.node(j);
          comp[j] = cplx(std::cos(k * s), std::sin(k * s)) * (A * dir.vectors[j].components);
        }
        return make_tangent(g, comp);
      });
}

LoopVectorField coordinate_field(int n) {
  return linear_field(Mat::Identity(n, n), Mat::Zero(n, n), Vec::Zero(n));
}

LoopVectorField field_lincomb(double a, const LoopVectorField& X, double b,
                              const LoopVectorField& Y) {
  const bool analytic = X.has_analytic_derivative() && Y.has_analytic_derivative();
  auto rule = [a, X, b, Y](const Loop& g) {
    const LoopTangent x = X(g);
    const LoopTangent y = Y(g);
    std::vector<Vec> comp(g.size());
    for (int j = 0; j < g.size(); ++j) {
      comp[j] = a * x.vectors[j].components + b * y.vectors[j].components;
    }
    return make_tangent(g, comp);
  };
  if (!analytic) return LoopVectorField(std::move(rule));
  auto deriv = [a, X, b, Y](const Loop& g, const LoopTangent& dir) {
    const LoopTangent x = X.analytic_derivative(g, dir);
    const LoopTangent y = Y.analytic_derivative(g, dir);
    std::vector<Vec> comp(g.size());
    for (int j = 0; j < g.size(); ++j) {
      comp[j] = a * x.vectors[j].components + b * y.vectors[j].components;
    }
    return make_tangent(g, comp);
  };
  return LoopVectorField(std::move(rule), std::move(deriv));
}

}  // namespace loopkahler
