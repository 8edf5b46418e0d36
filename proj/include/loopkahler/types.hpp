#pragma once

#include <complex>

#include <Eigen/Dense>

namespace loopkahler {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

inline constexpr const char* kVersion = "0.1.0";

/// Kahan-compensated accumulator. Loop quadratures sum many near-cancelling
/// terms and the result must not depend on term ordering beyond one ulp.
template <typename T>
class KahanSum {
 public:
  void add(const T& term) {
    const T y = term - comp_;
    const T t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  T value() const { return sum_; }

 private:
  T sum_{};
  T comp_{};
};

}  // namespace loopkahler
