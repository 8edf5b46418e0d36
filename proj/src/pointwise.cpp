#include "loopkahler/pointwise.hpp"

#include <cmath>
#include <stdexcept>

namespace loopkahler {

namespace {

const cplx kI(0.0, 1.0);

// det of the 3x3 matrix whose rows are the three covectors applied to (u,v,w).
cplx det3(const cplx& a0, const cplx& a1, const cplx& a2, const cplx& b0, const cplx& b1,
          const cplx& b2, const cplx& c0, const cplx& c1, const cplx& c2) {
  return a0 * (b1 * c2 - b2 * c1) - a1 * (b0 * c2 - b2 * c0) + a2 * (b0 * c1 - b1 * c0);
}

}  // namespace

cplx h_inner(const KahlerModel& m, const TangentVec& u, const TangentVec& v) {
  require_same_base(u, v);
  if (u.dim() != m.dim() || v.dim() != m.dim()) {
    throw std::invalid_argument("tangent vector dimension mismatch");
  }
  if (!all_finite(u.components) || !all_finite(v.components)) {
    throw std::domain_error("non-finite tangent components");
  }
  const Mat h = m.metric(u.base);
  return (u.components.transpose() * h * v.components.conjugate()).value();
}

double omega_eval(const KahlerModel& m, const TangentVec& u, const TangentVec& v) {
  return -h_inner(m, u, v).imag();
}

double d_omega_eval(const KahlerModel& m, const TangentVec& u, const TangentVec& v,
                    const TangentVec& w) {
  require_same_base(u, v);
  require_same_base(u, w);
  const int n = m.dim();
  const MetricDerivs d = m.metric_derivs(u.base);
  const Vec& a = u.components;
  const Vec& b = v.components;
  const Vec& c = w.components;
  cplx acc(0.0, 0.0);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const cplx hz = d.dz[k](i, j);
        const cplx hzb = d.dzbar[k](i, j);
        if (hz != cplx(0.0, 0.0)) {
          // dz_k ∧ dz_i ∧ dz̄_j on (u, v, w)
          acc += hz * det3(a[k], b[k], c[k], a[i], b[i], c[i], std::conj(a[j]), std::conj(b[j]),
                           std::conj(c[j]));
        }
        if (hzb != cplx(0.0, 0.0)) {
          // dz̄_k ∧ dz_i ∧ dz̄_j on (u, v, w)
          acc += hzb * det3(std::conj(a[k]), std::conj(b[k]), std::conj(c[k]), a[i], b[i], c[i],
                            std::conj(a[j]), std::conj(b[j]), std::conj(c[j]));
        }
      }
    }
  }
  return (0.5 * kI * acc).real();
}

std::vector<Mat> christoffels(const KahlerModel& m, const ChartPoint& z) {
  if (!m.kahler_expected()) {
    throw std::domain_error("christoffels requested on non-Kähler model '" + m.name() + "'");
  }
  const int n = m.dim();
  const Mat h = m.metric(z);
  Eigen::FullPivLU<Mat> lu(h);
  if (!lu.isInvertible()) throw std::runtime_error("singular metric at requested point");
  const Mat hinv = lu.inverse();
  const MetricDerivs d = m.metric_derivs(z);
  std::vector<Mat> gamma(n, Mat::Zero(n, n));
  // Γ^k_ij = Σ_l h^{kl̄} ∂h_{jl̄}/∂z_i with h^{kl̄} = (H^{-1})(l,k).
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        cplx s(0.0, 0.0);
        for (int l = 0; l < n; ++l) s += hinv(l, k) * d.dz[i](j, l);
        gamma[k](i, j) = s;
      }
    }
  }
  return gamma;
}

Vec christoffel_contract(const std::vector<Mat>& gamma, const Vec& a, const Vec& b) {
  const int n = static_cast<int>(gamma.size());
  Vec out(n);
  for (int k = 0; k < n; ++k) out[k] = (a.transpose() * gamma[k] * b).value();
  return out;
}

GeodesicResult integrate_geodesic(const KahlerModel& m, const ChartPoint& z0, const Vec& v0,
                                  double T, int steps) {
  if (steps < 1) throw std::invalid_argument("integrate_geodesic needs steps >= 1");
  m.validate_point(z0);
  if (v0.size() != m.dim()) throw std::invalid_argument("velocity dimension mismatch");

  const double dt = T / steps;
  ChartPoint z = z0;
  Vec v = v0;

  const auto acc = [&m](const ChartPoint& base, const Vec& zc, const Vec& vc) -> Vec {
    ChartPoint p = base;
    p.coords = zc;
    return -christoffel_contract(christoffels(m, p), vc, vc);
  };

  GeodesicResult res;
  res.points.reserve(steps + 1);
  res.points.push_back(z);
  for (int s = 0; s < steps; ++s) {
    const Vec k1z = v;
    const Vec k1v = acc(z, z.coords, v);
    const Vec k2z = v + 0.5 * dt * k1v;
    const Vec k2v = acc(z, z.coords + 0.5 * dt * k1z, k2z);
    const Vec k3z = v + 0.5 * dt * k2v;
    const Vec k3v = acc(z, z.coords + 0.5 * dt * k2z, k3z);
    const Vec k4z = v + dt * k3v;
    const Vec k4v = acc(z, z.coords + dt * k3z, k4z);
    z.coords += (dt / 6.0) * (k1z + 2.0 * k2z + 2.0 * k3z + k4z);
    v += (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    if (!all_finite(z.coords) || !all_finite(v)) {
      throw std::domain_error("geodesic left the atlas (non-finite coordinates)");
    }
    if (!m.in_safe_region(z)) {
      const int chart = m.preferred_chart(z);
      TangentVec tv{z, v};
      tv = m.pushforward_to_chart(tv, chart);
      z = tv.base;
      v = tv.components;
    }
    res.points.push_back(z);
  }
  res.final_velocity = TangentVec{z, v};
  return res;
}

double fs_distance_homogeneous(const Vec& wp, const Vec& wq) {
  const double np = wp.norm();
  const double nq = wq.norm();
  if (np == 0.0 || nq == 0.0) throw std::domain_error("zero homogeneous vector");
  const Vec p = wp / np;
  const Vec q = wq / nq;
  // Gram–Schmidt: residual of q against the unit representative p.
  const cplx qp = p.dot(q);  // ⟨q,p⟩ = Σ q_i conj(p_i); Eigen conjugates the left argument
  const Vec r = q - qp * p;
  const double c = std::abs(qp);
  if (c == 0.0) return 0.5 * kPi;
  return std::atan(r.norm() / c);
}

double fs_distance(const KahlerModel& m, const ChartPoint& p, const ChartPoint& q) {
  const auto wp = m.homogeneous(p);
  const auto wq = m.homogeneous(q);
  if (!wp || !wq) {
    throw std::domain_error("fs_distance needs a projective model, got '" + m.name() + "'");
  }
  return fs_distance_homogeneous(*wp, *wq);
}

double fs_form_quadratic(const Vec& gamma, const Vec& gamma_dot) {
  const double n2 = gamma.squaredNorm();
  if (n2 == 0.0) throw std::domain_error("zero base vector");
  const double d2 = gamma_dot.squaredNorm();
  const cplx ip = gamma.dot(gamma_dot);  // ⟨γ̇,γ⟩; only |·|² enters
  return (n2 * d2 - std::norm(ip)) / (n2 * n2);
}

std::pair<double, double> pl2_norm_bound_check(const Vec& gamma, const Vec& gamma_dot) {
  const double n2 = gamma.squaredNorm();
  if (n2 == 0.0) throw std::domain_error("zero base vector");
  const double lhs = fs_form_quadratic(gamma, gamma_dot);
  const double rhs = 2.0 * gamma_dot.squaredNorm() / n2;
  return {lhs, rhs};
}

double model_distance(const KahlerModel& m, const ChartPoint& p, const ChartPoint& q) {
  if (m.homogeneous(p).has_value()) return fs_distance(m, p, q);
  if (dynamic_cast<const FlatModel*>(&m) != nullptr) {
    if (p.chart_id != q.chart_id) throw std::invalid_argument("chart mismatch");
    return (q.coords - p.coords).norm();
  }
  throw std::domain_error("no closed-form distance for model '" + m.name() + "'");
}

}  // namespace loopkahler
