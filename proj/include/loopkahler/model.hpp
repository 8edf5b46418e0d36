#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "loopkahler/point.hpp"
#include "loopkahler/types.hpp"

namespace loopkahler {

/// First derivatives of the metric matrix in one chart:
/// dz[k](i,j) = ∂h_ij/∂z_k and dzbar[k](i,j) = ∂h_ij/∂z̄_k.
struct MetricDerivs {
  std::vector<Mat> dz;
  std::vector<Mat> dzbar;
};

/// A finite-dimensional Hermitian (usually Kähler) manifold presented through
/// charts. The metric is the matrix h with h(u,v) = Σ h_ij u_i conj(v_j),
/// linear in the first slot and conjugate-linear in the second.
class KahlerModel {
 public:
  virtual ~KahlerModel() = default;

  virtual int dim() const = 0;
  virtual int chart_count() const = 0;
  virtual const std::string& name() const = 0;
  virtual bool kahler_expected() const = 0;

  virtual Mat metric(const ChartPoint& p) const = 0;

  /// Analytic when the model provides it, otherwise central finite
  /// differences of metric() with step 1e-5 relative to coordinate size.
  virtual MetricDerivs metric_derivs(const ChartPoint& p) const { return metric_derivs_fd(p); }

  /// Atlas policy. Single-chart models keep the defaults.
  virtual bool in_safe_region(const ChartPoint&) const { return true; }
  virtual int preferred_chart(const ChartPoint& p) const { return p.chart_id; }
  virtual ChartPoint to_chart(const ChartPoint& p, int chart) const;
  virtual TangentVec pushforward_to_chart(const TangentVec& v, int chart) const;

  /// Homogeneous lift for projective models; nullopt otherwise.
  virtual std::optional<Vec> homogeneous(const ChartPoint&) const { return std::nullopt; }
  virtual ChartPoint from_homogeneous(const Vec&) const;

  /// Throws std::domain_error / std::invalid_argument on malformed points.
  void validate_point(const ChartPoint& p) const;

  /// Re-expresses p in its preferred chart if it left the safe region.
  ChartPoint normalize_chart(const ChartPoint& p) const;

 protected:
  MetricDerivs metric_derivs_fd(const ChartPoint& p, double step = 1e-5) const;
};

using ModelPtr = std::shared_ptr<const KahlerModel>;

/// Flat ℂⁿ with the identity metric; one chart.
class FlatModel final : public KahlerModel {
 public:
  explicit FlatModel(int n);
  int dim() const override { return n_; }
  int chart_count() const override { return 1; }
  const std::string& name() const override { return name_; }
  bool kahler_expected() const override { return true; }
  Mat metric(const ChartPoint& p) const override;
  MetricDerivs metric_derivs(const ChartPoint& p) const override;

 private:
  int n_;
  std::string name_;
};

/// ℙⁿ with the Fubini–Study metric normalized so dist = arctan(R);
/// n+1 standard affine charts U_k = {w_k ≠ 0}, chart coordinates
/// z_i = w_i / w_k listed by ascending homogeneous index skipping k.
class FubiniStudyModel final : public KahlerModel {
 public:
  explicit FubiniStudyModel(int n);
  int dim() const override { return n_; }
  int chart_count() const override { return n_ + 1; }
  const std::string& name() const override { return name_; }
  bool kahler_expected() const override { return true; }
  Mat metric(const ChartPoint& p) const override;
  MetricDerivs metric_derivs(const ChartPoint& p) const override;
  bool in_safe_region(const ChartPoint& p) const override;
  int preferred_chart(const ChartPoint& p) const override;
  ChartPoint to_chart(const ChartPoint& p, int chart) const override;
  TangentVec pushforward_to_chart(const TangentVec& v, int chart) const override;
  std::optional<Vec> homogeneous(const ChartPoint& p) const override;
  ChartPoint from_homogeneous(const Vec& w) const override;

 private:
  int n_;
  std::string name_;
};

/// Hermitian but non-Kähler test model on ℂ²:
/// h₁₁ = 1 + ε Re(z₂), h₂₂ = 1, h₁₂ = h₂₁ = 0 with ε = 0.1.
class PerturbedHermitianModel final : public KahlerModel {
 public:
  explicit PerturbedHermitianModel(double eps = 0.1);
  int dim() const override { return 2; }
  int chart_count() const override { return 1; }
  const std::string& name() const override { return name_; }
  bool kahler_expected() const override { return false; }
  Mat metric(const ChartPoint& p) const override;
  MetricDerivs metric_derivs(const ChartPoint& p) const override;
  double eps() const { return eps_; }

 private:
  double eps_;
  std::string name_;
};

/// Single-chart model on ℂⁿ with a user-supplied metric callback and
/// optional analytic derivatives (finite differences otherwise).
class CallbackHermitianModel final : public KahlerModel {
 public:
  using MetricFn = std::function<Mat(const Vec&)>;
  using DerivFn = std::function<MetricDerivs(const Vec&)>;

  CallbackHermitianModel(std::string name, int n, MetricFn h, DerivFn dh = nullptr,
                         bool kahler_expected = false);
  int dim() const override { return n_; }
  int chart_count() const override { return 1; }
  const std::string& name() const override { return name_; }
  bool kahler_expected() const override { return kahler_; }
  Mat metric(const ChartPoint& p) const override;
  MetricDerivs metric_derivs(const ChartPoint& p) const override;

 private:
  std::string name_;
  int n_;
  MetricFn h_;
  DerivFn dh_;
  bool kahler_;
};

/// Factory over the built-in model names:
/// flat-cn | fubini-study-p1 | fubini-study-pn | perturbed-hermitian.
/// n is the complex dimension (ignored where the name fixes it).
ModelPtr make_model(const std::string& name, int n = 1);

}  // namespace loopkahler
