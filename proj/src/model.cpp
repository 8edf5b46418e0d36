#include "loopkahler/model.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace loopkahler {

namespace {

constexpr double kChartSwitchRadius = 2.0;

}  // namespace

ChartPoint KahlerModel::to_chart(const ChartPoint& p, int chart) const {
  if (chart == p.chart_id) return p;
  throw std::domain_error("model '" + name() + "' has a single chart");
}

TangentVec KahlerModel::pushforward_to_chart(const TangentVec& v, int chart) const {
  if (chart == v.base.chart_id) return v;
  throw std::domain_error("model '" + name() + "' has a single chart");
}

ChartPoint KahlerModel::from_homogeneous(const Vec&) const {
  throw std::domain_error("model '" + name() + "' is not projective");
}

void KahlerModel::validate_point(const ChartPoint& p) const {
  if (p.dim() != dim()) throw std::invalid_argument("point dimension mismatch");
  if (p.chart_id < 0 || p.chart_id >= chart_count()) {
    throw std::domain_error("chart_id out of range for model '" + name() + "'");
  }
  if (!all_finite(p.coords)) throw std::domain_error("non-finite point coordinates");
}

ChartPoint KahlerModel::normalize_chart(const ChartPoint& p) const {
  if (in_safe_region(p)) return p;
  return to_chart(p, preferred_chart(p));
}

MetricDerivs KahlerModel::metric_derivs_fd(const ChartPoint& p, double step) const {
  const int n = dim();
  MetricDerivs d;
  d.dz.resize(n);
  d.dzbar.resize(n);
  for (int k = 0; k < n; ++k) {
    const double s = step * (1.0 + std::abs(p.coords[k]));
    ChartPoint q = p;
    q.coords[k] = p.coords[k] + s;
    const Mat hx_p = metric(q);
    q.coords[k] = p.coords[k] - s;
    const Mat hx_m = metric(q);
    q.coords[k] = p.coords[k] + cplx(0.0, s);
    const Mat hy_p = metric(q);
    q.coords[k] = p.coords[k] - cplx(0.0, s);
    const Mat hy_m = metric(q);
    const Mat dx = (hx_p - hx_m) / (2.0 * s);
    const Mat dy = (hy_p - hy_m) / (2.0 * s);
    // Wirtinger split: ∂/∂z = (∂x − i∂y)/2, ∂/∂z̄ = (∂x + i∂y)/2.
    d.dz[k] = 0.5 * (dx - cplx(0.0, 1.0) * dy);
    d.dzbar[k] = 0.5 * (dx + cplx(0.0, 1.0) * dy);
  }
  return d;
}

// ── flat ℂⁿ ────────────────────────────────────────────────────────────────

FlatModel::FlatModel(int n) : n_(n), name_("flat-cn") {
  if (n < 1) throw std::invalid_argument("flat-cn needs n >= 1");
}

Mat FlatModel::metric(const ChartPoint& p) const {
  validate_point(p);
  return Mat::Identity(n_, n_);
}

MetricDerivs FlatModel::metric_derivs(const ChartPoint& p) const {
  validate_point(p);
  MetricDerivs d;
  d.dz.assign(n_, Mat::Zero(n_, n_));
  d.dzbar.assign(n_, Mat::Zero(n_, n_));
  return d;
}

// ── Fubini–Study ℙⁿ ────────────────────────────────────────────────────────

FubiniStudyModel::FubiniStudyModel(int n)
    : n_(n), name_(n == 1 ? "fubini-study-p1" : "fubini-study-pn") {
  if (n < 1) throw std::invalid_argument("fubini-study needs n >= 1");
}

Mat FubiniStudyModel::metric(const ChartPoint& p) const {
  validate_point(p);
  const Vec& z = p.coords;
  const double D = 1.0 + z.squaredNorm();
  Mat h = Mat::Identity(n_, n_) / D;
  h.noalias() -= (z.conjugate() * z.transpose()) / (D * D);
  return h;
}

MetricDerivs FubiniStudyModel::metric_derivs(const ChartPoint& p) const {
  validate_point(p);
  const Vec& z = p.coords;
  const double D = 1.0 + z.squaredNorm();
  const double D2 = D * D;
  const double D3 = D2 * D;
  MetricDerivs d;
  d.dz.resize(n_);
  d.dzbar.resize(n_);
  for (int k = 0; k < n_; ++k) {
    Mat a = Mat::Zero(n_, n_);
    Mat b = Mat::Zero(n_, n_);
    const cplx zk = z[k];
    const cplx zkc = std::conj(zk);
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < n_; ++j) {
        const cplx zic = std::conj(z[i]);
        const cplx zj = z[j];
        cplx av = 2.0 * zic * zj * zkc / D3;
        if (i == j) av -= zkc / D2;
        if (j == k) av -= zic / D2;
        a(i, j) = av;
        cplx bv = 2.0 * zic * zj * zk / D3;
        if (i == j) bv -= zk / D2;
        if (i == k) bv -= zj / D2;
        b(i, j) = bv;
      }
    }
    d.dz[k] = std::move(a);
    d.dzbar[k] = std::move(b);
  }
  return d;
}

bool FubiniStudyModel::in_safe_region(const ChartPoint& p) const {
  return p.coords.size() == 0 || p.coords.cwiseAbs().maxCoeff() <= kChartSwitchRadius;
}

int FubiniStudyModel::preferred_chart(const ChartPoint& p) const {
  const Vec w = *homogeneous(p);
  Eigen::Index imax = 0;
  w.cwiseAbs().maxCoeff(&imax);
  return static_cast<int>(imax);
}

std::optional<Vec> FubiniStudyModel::homogeneous(const ChartPoint& p) const {
  validate_point(p);
  Vec w(n_ + 1);
  int c = 0;
  for (int i = 0; i <= n_; ++i) {
    w[i] = (i == p.chart_id) ? cplx(1.0, 0.0) : p.coords[c++];
  }
  return w;
}

ChartPoint FubiniStudyModel::from_homogeneous(const Vec& w) const {
  if (w.size() != n_ + 1) throw std::invalid_argument("homogeneous vector dimension mismatch");
  if (!all_finite(w)) throw std::domain_error("non-finite homogeneous coordinates");
  Eigen::Index imax = 0;
  const double wmax = w.cwiseAbs().maxCoeff(&imax);
  if (wmax == 0.0) throw std::domain_error("zero homogeneous vector");
  ChartPoint p;
  p.chart_id = static_cast<int>(imax);
  p.coords.resize(n_);
  int c = 0;
  for (int i = 0; i <= n_; ++i) {
    if (i == p.chart_id) continue;
    p.coords[c++] = w[i] / w[imax];
  }
  return p;
}

ChartPoint FubiniStudyModel::to_chart(const ChartPoint& p, int chart) const {
  if (chart == p.chart_id) return p;
  if (chart < 0 || chart > n_) throw std::domain_error("chart_id out of range");
  const Vec w = *homogeneous(p);
  if (w[chart] == cplx(0.0, 0.0)) {
    throw std::domain_error("point lies on the hyperplane at infinity of the target chart");
  }
  ChartPoint q;
  q.chart_id = chart;
  q.coords.resize(n_);
  int c = 0;
  for (int i = 0; i <= n_; ++i) {
    if (i == chart) continue;
    q.coords[c++] = w[i] / w[chart];
  }
  return q;
}

TangentVec FubiniStudyModel::pushforward_to_chart(const TangentVec& v, int chart) const {
  if (chart == v.base.chart_id) return v;
  const Vec w = *homogeneous(v.base);
  // Lift the velocity: zero in the source chart slot.
  Vec wdot = Vec::Zero(n_ + 1);
  int c = 0;
  for (int i = 0; i <= n_; ++i) {
    if (i == v.base.chart_id) continue;
    wdot[i] = v.components[c++];
  }
  const cplx wc = w[chart];
  if (wc == cplx(0.0, 0.0)) {
    throw std::domain_error("pushforward target chart is singular at this point");
  }
  TangentVec out;
  out.base = to_chart(v.base, chart);
  out.components.resize(n_);
  c = 0;
  for (int i = 0; i <= n_; ++i) {
    if (i == chart) continue;
    // d(w_i/w_c) = ẇ_i/w_c − w_i ẇ_c / w_c².
    out.components[c++] = wdot[i] / wc - w[i] * wdot[chart] / (wc * wc);
  }
  return out;
}

// ── perturbed Hermitian ℂ² ─────────────────────────────────────────────────

PerturbedHermitianModel::PerturbedHermitianModel(double eps)
    : eps_(eps), name_("perturbed-hermitian") {}

Mat PerturbedHermitianModel::metric(const ChartPoint& p) const {
  validate_point(p);
  Mat h = Mat::Identity(2, 2);
  h(0, 0) = 1.0 + eps_ * p.coords[1].real();
  if (h(0, 0).real() <= 0.0) throw std::domain_error("perturbed metric lost positivity");
  return h;
}

MetricDerivs PerturbedHermitianModel::metric_derivs(const ChartPoint& p) const {
  validate_point(p);
  MetricDerivs d;
  d.dz.assign(2, Mat::Zero(2, 2));
  d.dzbar.assign(2, Mat::Zero(2, 2));
  // Re(z₂) = (z₂ + z̄₂)/2.
  d.dz[1](0, 0) = 0.5 * eps_;
  d.dzbar[1](0, 0) = 0.5 * eps_;
  return d;
}

// ── callback model ─────────────────────────────────────────────────────────

CallbackHermitianModel::CallbackHermitianModel(std::string name, int n, MetricFn h, DerivFn dh,
                                               bool kahler_expected)
    : name_(std::move(name)), n_(n), h_(std::move(h)), dh_(std::move(dh)), kahler_(kahler_expected) {
  if (n < 1) throw std::invalid_argument("callback model needs n >= 1");
  if (!h_) throw std::invalid_argument("callback model needs a metric function");
}

Mat CallbackHermitianModel::metric(const ChartPoint& p) const {
  validate_point(p);
  return h_(p.coords);
}

MetricDerivs CallbackHermitianModel::metric_derivs(const ChartPoint& p) const {
  validate_point(p);
  if (dh_) return dh_(p.coords);
  return metric_derivs_fd(p);
}

// ── factory ────────────────────────────────────────────────────────────────

ModelPtr make_model(const std::string& name, int n) {
  if (name == "flat-cn") return std::make_shared<FlatModel>(n);
  if (name == "fubini-study-p1") return std::make_shared<FubiniStudyModel>(1);
  if (name == "fubini-study-pn") return std::make_shared<FubiniStudyModel>(n);
  if (name == "perturbed-hermitian") return std::make_shared<PerturbedHermitianModel>();
  throw std::invalid_argument("unknown model name '" + name + "'");
}

}  // namespace loopkahler
