#include "loopkahler/connection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "loopkahler/pointwise.hpp"

namespace loopkahler {

namespace {

constexpr double kAntipodalTol = 1e-9;

std::string antipodal_message(const std::vector<int>& nodes) {
  std::ostringstream os;
  os << "antipodal endpoints: the geodesic BVP has infinitely many minimizers";
  if (!nodes.empty()) {
    os << " (nodes";
    for (int j : nodes) os << ' ' << j;
    os << ')';
  }
  return os.str();
}

// 3-point first and second derivative on a possibly nonuniform stencil.
Vec stencil_d1(const Vec& zm, const Vec& z0, const Vec& zp, double h1, double h2) {
  return (-h2 / (h1 * (h1 + h2))) * zm + ((h2 - h1) / (h1 * h2)) * z0 +
         (h1 / (h2 * (h1 + h2))) * zp;
}

Vec stencil_d2(const Vec& zm, const Vec& z0, const Vec& zp, double h1, double h2) {
  return (2.0 / (h1 * (h1 + h2))) * zm - (2.0 / (h1 * h2)) * z0 + (2.0 / (h2 * (h1 + h2))) * zp;
}

Eigen::VectorXd pack_real(const Vec& z) {
  Eigen::VectorXd x(2 * z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    x[2 * i] = z[i].real();
    x[2 * i + 1] = z[i].imag();
  }
  return x;
}

Vec unpack_real(const Eigen::VectorXd& x) {
  Vec z(x.size() / 2);
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = cplx(x[2 * i], x[2 * i + 1]);
  return z;
}

// Newton iteration on the interior points of a leaf, solving the discrete
// geodesic equations checked by geodesic_residual. Chart assignments stay
// fixed; the Jacobian is block tridiagonal and assembled by finite
// differences column by column.
void polish_leaf(const KahlerModel& m, std::vector<ChartPoint>& leaf,
                 const std::vector<double>& times, double tol, int max_iter) {
  const int P = static_cast<int>(leaf.size()) - 1;
  if (P < 2) return;
  const int K = P - 1;
  const int b = 2 * m.dim();

  const auto residual_at = [&](int i) { return pack_real(leaf_residual_vec(m, leaf, times, i)); };

  for (int iter = 0; iter < max_iter; ++iter) {
    std::vector<Eigen::VectorXd> R(K);
    double maxres = 0.0;
    for (int i = 1; i <= K; ++i) {
      R[i - 1] = residual_at(i);
      maxres = std::max(maxres, R[i - 1].cwiseAbs().maxCoeff());
    }
    if (maxres <= tol) return;

    std::vector<Eigen::MatrixXd> A(K, Eigen::MatrixXd::Zero(b, b));
    std::vector<Eigen::MatrixXd> B(K, Eigen::MatrixXd::Zero(b, b));
    std::vector<Eigen::MatrixXd> C(K, Eigen::MatrixXd::Zero(b, b));
    for (int q = 1; q <= K; ++q) {
      for (int c = 0; c < b; ++c) {
        const int ci = c / 2;
        const bool im = (c % 2) == 1;
        const cplx save = leaf[q].coords[ci];
        const double eps = 1e-6 * (1.0 + std::abs(save));
        leaf[q].coords[ci] = save + (im ? cplx(0.0, eps) : cplx(eps, 0.0));
        for (int row = q - 1; row <= q + 1; ++row) {
          if (row < 1 || row > K) continue;
          const Eigen::VectorXd col = (residual_at(row) - R[row - 1]) / eps;
          if (row == q) {
            A[row - 1].col(c) = col;
          } else if (row == q - 1) {
            B[row - 1].col(c) = col;  // row depends on its upper neighbour q
          } else {
            C[row - 1].col(c) = col;  // row depends on its lower neighbour q
          }
        }
        leaf[q].coords[ci] = save;
      }
    }

    // Block-tridiagonal Thomas elimination.
    std::vector<Eigen::MatrixXd> E(K);
    std::vector<Eigen::VectorXd> y(K);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A[0]);
    E[0] = lu.solve(B[0]);
    y[0] = lu.solve(-R[0]);
    for (int i = 1; i < K; ++i) {
      const Eigen::MatrixXd D = A[i] - C[i] * E[i - 1];
      Eigen::PartialPivLU<Eigen::MatrixXd> lud(D);
      E[i] = lud.solve(B[i]);
      y[i] = lud.solve(-R[i] - C[i] * y[i - 1]);
    }
    std::vector<Eigen::VectorXd> delta(K);
    delta[K - 1] = y[K - 1];
    for (int i = K - 2; i >= 0; --i) delta[i] = y[i] - E[i] * delta[i + 1];

    for (int i = 1; i <= K; ++i) {
      leaf[i].coords += unpack_real(delta[i - 1]);
    }
  }
  throw std::runtime_error("leaf geodesic BVP did not converge");
}

std::vector<ChartPoint> great_circle_leaf(const KahlerModel& m, const ChartPoint& p,
                                          const ChartPoint& q, int steps) {
  const Vec wp_raw = *m.homogeneous(p);
  const Vec wq_raw = *m.homogeneous(q);
  const Vec wp = wp_raw / wp_raw.norm();
  Vec wq = wq_raw / wq_raw.norm();
  const cplx qp = wp.dot(wq);  // ⟨q, p⟩ as Σ wq_i conj(wp_i)
  const double c = std::abs(qp);
  if (c < kAntipodalTol) throw AntipodalError({});

  std::vector<ChartPoint> leaf(steps + 1);
  leaf[0] = p;
  leaf[steps] = q;
  wq *= std::conj(qp) / c;  // phase alignment: ⟨wq, wp⟩ now real positive
  const double alpha = std::acos(std::min(c, 1.0));
  Vec r = wq - c * wp;
  const double rn = r.norm();
  if (rn < 1e-15) {
    for (int i = 1; i < steps; ++i) leaf[i] = p;
    return leaf;
  }
  r /= rn;
  for (int i = 1; i < steps; ++i) {
    const double th = alpha * i / steps;
    leaf[i] = m.from_homogeneous(std::cos(th) * wp + std::sin(th) * r);
  }
  return leaf;
}

std::vector<ChartPoint> shooting_leaf(const KahlerModel& m, const ChartPoint& p,
                                      const ChartPoint& q, int steps) {
  if (p.chart_id != q.chart_id) throw std::invalid_argument("shooting needs a common chart");
  const int n = m.dim();
  const int b = 2 * n;
  const int fine = std::max(steps, 256);

  const auto boundary_miss = [&](const Vec& v) {
    const GeodesicResult res = integrate_geodesic(m, p, v, 1.0, fine);
    const ChartPoint end = m.to_chart(res.points.back(), q.chart_id);
    return pack_real(Vec(end.coords - q.coords));
  };

  Eigen::VectorXd v = pack_real(Vec(q.coords - p.coords));
  Eigen::VectorXd F = boundary_miss(unpack_real(v));
  // Broyden (multidimensional secant) with one finite-difference Jacobian seed.
  Eigen::MatrixXd J(b, b);
  for (int c = 0; c < b; ++c) {
    Eigen::VectorXd vp = v;
    const double eps = 1e-6 * (1.0 + std::abs(v[c]));
    vp[c] += eps;
    J.col(c) = (boundary_miss(unpack_real(vp)) - F) / eps;
  }
  for (int iter = 0; iter < 50 && F.norm() > 1e-10; ++iter) {
    const Eigen::VectorXd dv = J.partialPivLu().solve(-F);
    const Eigen::VectorXd vn = v + dv;
    const Eigen::VectorXd Fn = boundary_miss(unpack_real(vn));
    const Eigen::VectorXd dF = Fn - F;
    J += (dF - J * dv) * dv.transpose() / dv.squaredNorm();
    v = vn;
    F = Fn;
  }
  if (F.norm() > 1e-8) throw std::runtime_error("geodesic shooting did not converge");

  const GeodesicResult res = integrate_geodesic(m, p, unpack_real(v), 1.0, steps);
  std::vector<ChartPoint> leaf = res.points;
  leaf.front() = p;
  leaf.back() = q;
  return leaf;
}

}  // namespace

AntipodalError::AntipodalError(std::vector<int> ns)
    : std::domain_error(antipodal_message(ns)), nodes(std::move(ns)) {}

LoopTangent covariant_derivative_loop(const KahlerModel& m, const Loop& g, const LoopTangent& nu,
                                      const LoopVectorField& xi) {
  if (!m.kahler_expected()) {
    throw std::domain_error("covariant derivative undefined on non-Kähler model '" + m.name() +
                            "'");
  }
  require_aligned(g, nu);
  const LoopTangent dxi = field_derivative(m, xi, g, nu);
  const LoopTangent xv = xi(g);
  std::vector<Vec> comp(g.size());
  for (int j = 0; j < g.size(); ++j) {
    comp[j] = dxi.vectors[j].components +
              christoffel_contract(christoffels(m, g.points[j]), nu.vectors[j].components,
                                   xv.vectors[j].components);
  }
  return make_tangent(g, comp);
}

double check_metric_compatibility(const KahlerModel& m, const Loop& g, const LoopVectorField& xi,
                                  const LoopVectorField& eta, const LoopVectorField& nu) {
  const LoopTangent nug = nu(g);
  const ScalarLoopFunctional F = [&](const Loop& gp) -> cplx {
    return loop_metric_H(m, gp, xi(gp), eta(gp));
  };
  const cplx lhs = directional_derivative(m, F, g, nug);
  const cplx rhs = loop_metric_H(m, g, covariant_derivative_loop(m, g, nug, xi), eta(g)) +
                   loop_metric_H(m, g, xi(g), covariant_derivative_loop(m, g, nug, eta));
  return std::abs(lhs - rhs);
}

double check_torsion_free(const KahlerModel& m, const Loop& g, const LoopVectorField& xi,
                          const LoopVectorField& eta) {
  const LoopTangent a = covariant_derivative_loop(m, g, xi(g), eta);
  const LoopTangent b = covariant_derivative_loop(m, g, eta(g), xi);
  const LoopTangent br = lie_bracket(m, xi, eta, g);
  double worst = 0.0;
  for (int j = 0; j < g.size(); ++j) {
    const TangentVec t{g.points[j], a.vectors[j].components - b.vectors[j].components -
                                        br.vectors[j].components};
    worst = std::max(worst, std::sqrt(std::max(0.0, h_inner(m, t, t).real())));
  }
  return worst;
}

void validate_path(const KahlerModel& m, const LoopPath& path) {
  if (path.times.size() != path.loops.size() || path.times.size() < 2) {
    throw std::invalid_argument("path needs matching times and loops, at least two of each");
  }
  if (path.times.front() != 0.0 || path.times.back() != 1.0) {
    throw std::invalid_argument("path times must run from 0 to 1");
  }
  for (size_t i = 1; i < path.times.size(); ++i) {
    if (path.times[i] <= path.times[i - 1]) {
      throw std::invalid_argument("path times must increase strictly");
    }
  }
  for (const Loop& g : path.loops) {
    require_valid_loop(m, g);
    if (!(g.grid == path.loops[0].grid)) throw std::invalid_argument("path grid mismatch");
  }
}

std::vector<ChartPoint> leaf_geodesic(const KahlerModel& m, const ChartPoint& p,
                                      const ChartPoint& q, int steps) {
  if (steps < 1) throw std::invalid_argument("leaf_geodesic needs steps >= 1");
  if (!m.kahler_expected()) {
    throw std::domain_error("leaf geodesics need a Kähler model, got '" + m.name() + "'");
  }
  m.validate_point(p);
  m.validate_point(q);

  std::vector<ChartPoint> leaf;
  if (m.homogeneous(p).has_value()) {
    leaf = great_circle_leaf(m, p, q, steps);
  } else {
    leaf = shooting_leaf(m, p, q, steps);
  }
  std::vector<double> times(steps + 1);
  for (int i = 0; i <= steps; ++i) times[i] = static_cast<double>(i) / steps;
  polish_leaf(m, leaf, times, 1e-10, 25);
  return leaf;
}

LoopPath assemble_loop_geodesic(const KahlerModel& m, const Loop& f, const Loop& g, int P) {
  require_valid_loop(m, f);
  require_valid_loop(m, g);
  if (!(f.grid == g.grid)) throw std::invalid_argument("endpoint loops on different grids");
  if (P < 1) throw std::invalid_argument("assemble_loop_geodesic needs P >= 1");

  if (m.homogeneous(f.points[0]).has_value()) {
    std::vector<int> bad;
    for (int j = 0; j < f.size(); ++j) {
      const Vec wf = *m.homogeneous(f.points[j]);
      const Vec wg = *m.homogeneous(g.points[j]);
      if (std::abs(wf.dot(wg)) / (wf.norm() * wg.norm()) < kAntipodalTol) bad.push_back(j);
    }
    if (!bad.empty()) throw AntipodalError(bad);
  }

  std::vector<std::vector<ChartPoint>> leaves(f.size());
  for (int j = 0; j < f.size(); ++j) {
    leaves[j] = leaf_geodesic(m, f.points[j], g.points[j], P);
  }

  LoopPath path;
  path.times.resize(P + 1);
  path.loops.resize(P + 1);
  for (int i = 0; i <= P; ++i) {
    path.times[i] = static_cast<double>(i) / P;
    path.loops[i].grid = f.grid;
    path.loops[i].points.resize(f.size());
    for (int j = 0; j < f.size(); ++j) path.loops[i].points[j] = leaves[j][i];
  }
  return path;
}

Vec leaf_residual_vec(const KahlerModel& m, const std::vector<ChartPoint>& leaf,
                      const std::vector<double>& times, int i) {
  const ChartPoint& zc = leaf[i];
  const Vec zm = m.to_chart(leaf[i - 1], zc.chart_id).coords;
  const Vec zp = m.to_chart(leaf[i + 1], zc.chart_id).coords;
  const double h1 = times[i] - times[i - 1];
  const double h2 = times[i + 1] - times[i];
  const Vec vel = stencil_d1(zm, zc.coords, zp, h1, h2);
  const Vec acc = stencil_d2(zm, zc.coords, zp, h1, h2);
  return acc + christoffel_contract(christoffels(m, zc), vel, vel);
}

double geodesic_residual(const KahlerModel& m, const LoopPath& path) {
  validate_path(m, path);
  const int P = path.steps();
  if (P < 2) throw std::invalid_argument("geodesic_residual needs P >= 2");
  const int M = path.loops[0].size();
  double worst = 0.0;
  std::vector<ChartPoint> leaf(P + 1);
  for (int j = 0; j < M; ++j) {
    for (int i = 0; i <= P; ++i) leaf[i] = path.loops[i].points[j];
    for (int i = 1; i < P; ++i) {
      const Vec r = leaf_residual_vec(m, leaf, path.times, i);
      const TangentVec t{leaf[i], r};
      worst = std::max(worst, std::sqrt(std::max(0.0, h_inner(m, t, t).real())));
    }
  }
  return worst;
}

namespace {

// Per-time velocity field D_tγ as an aligned tangent (centered differences at
// interior times, one-sided at the ends).
LoopTangent path_velocity(const KahlerModel& m, const LoopPath& path, int i) {
  const int P = path.steps();
  const Loop& cur = path.loops[i];
  std::vector<Vec> comp(cur.size());
  for (int j = 0; j < cur.size(); ++j) {
    const int chart = cur.points[j].chart_id;
    if (i == 0) {
      const Vec znext = m.to_chart(path.loops[1].points[j], chart).coords;
      comp[j] = (znext - cur.points[j].coords) / (path.times[1] - path.times[0]);
    } else if (i == P) {
      const Vec zprev = m.to_chart(path.loops[P - 1].points[j], chart).coords;
      comp[j] = (cur.points[j].coords - zprev) / (path.times[P] - path.times[P - 1]);
    } else {
      const Vec zm = m.to_chart(path.loops[i - 1].points[j], chart).coords;
      const Vec zp = m.to_chart(path.loops[i + 1].points[j], chart).coords;
      comp[j] = stencil_d1(zm, cur.points[j].coords, zp, path.times[i] - path.times[i - 1],
                           path.times[i + 1] - path.times[i]);
    }
  }
  return make_tangent(cur, comp);
}

double path_integral(const KahlerModel& m, const LoopPath& path, bool sqrt_speed) {
  validate_path(m, path);
  const int P = path.steps();
  std::vector<double> f(P + 1);
  for (int i = 0; i <= P; ++i) {
    const LoopTangent v = path_velocity(m, path, i);
    const double h2 = std::max(0.0, loop_metric_H(m, path.loops[i], v, v).real());
    f[i] = sqrt_speed ? std::sqrt(h2) : h2;
  }
  KahanSum<double> acc;
  for (int i = 0; i < P; ++i) {
    acc.add(0.5 * (path.times[i + 1] - path.times[i]) * (f[i] + f[i + 1]));
  }
  return acc.value();
}

}  // namespace

double path_length(const KahlerModel& m, const LoopPath& path) {
  return path_integral(m, path, true);
}

double path_energy(const KahlerModel& m, const LoopPath& path) {
  return path_integral(m, path, false);
}

}  // namespace loopkahler
