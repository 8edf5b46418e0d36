#include "loopkahler/sampling.hpp"

#include <cmath>

namespace loopkahler {

std::uint64_t split_seed(std::uint64_t base, std::string_view tag) {
  // FNV-1a over the tag, mixed with the base seed.
  std::uint64_t h = 14695981039346656037ull ^ base;
  for (const char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdull;
  h ^= h >> 33;
  return h;
}

namespace {

cplx unit_disk(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    const cplx z(u(rng), u(rng));
    if (std::norm(z) <= 1.0) return z;
  }
}

Mat random_matrix(int n, std::mt19937_64& rng, double scale) {
  Mat A(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) A(i, j) = scale * unit_disk(rng);
  }
  return A;
}

Vec random_vector(int n, std::mt19937_64& rng, double scale) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = scale * unit_disk(rng);
  return v;
}

}  // namespace

Loop random_loop(const KahlerModel& m, const LoopGrid& grid, std::mt19937_64& rng, double radius,
                 int max_harmonic) {
  const int n = m.dim();
  const int modes = 2 * max_harmonic + 1;
  // Coefficient budget keeps max |z_i| below radius.
  const double scale = radius / modes;
  std::vector<std::vector<cplx>> coef(n, std::vector<cplx>(modes));
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < modes; ++k) coef[i][k] = scale * unit_disk(rng);
  }
  Loop g;
  g.grid = grid;
  g.points.resize(grid.size());
  for (int j = 0; j < grid.size(); ++j) {
    const double s = grid.node(j);
    Vec z(n);
    for (int i = 0; i < n; ++i) {
      cplx acc(0.0, 0.0);
      for (int k = -max_harmonic; k <= max_harmonic; ++k) {
        acc += coef[i][k + max_harmonic] * cplx(std::cos(k * s), std::sin(k * s));
      }
      z[i] = acc;
    }
    g.points[j] = ChartPoint{0, z};
  }
  return g;
}

LoopTangent random_tangent(const Loop& g, std::mt19937_64& rng, double scale) {
  const int n = g.points.empty() ? 0 : g.points[0].dim();
  const int max_harmonic = 2;
  const int modes = 2 * max_harmonic + 1;
  std::vector<std::vector<cplx>> coef(n, std::vector<cplx>(modes));
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < modes; ++k) coef[i][k] = (scale / modes) * unit_disk(rng);
  }
  std::vector<Vec> comp(g.size());
  for (int j = 0; j < g.size(); ++j) {
    const double s = g.grid.node(j);
    Vec v(n);
    for (int i = 0; i < n; ++i) {
      cplx acc(0.0, 0.0);
      for (int k = -max_harmonic; k <= max_harmonic; ++k) {
        acc += coef[i][k + max_harmonic] * cplx(std::cos(k * s), std::sin(k * s));
      }
      v[i] = acc;
    }
    comp[j] = v;
  }
  return make_tangent(g, comp);
}

LoopVectorField random_field(const KahlerModel& m, std::mt19937_64& rng) {
  const int n = m.dim();
  std::uniform_int_distribution<int> kind(0, 2);
  std::uniform_int_distribution<int> harmonic(1, 2);
  switch (kind(rng)) {
    case 0:
      return constant_field(random_vector(n, rng, 0.7));
    case 1:
      return linear_field(random_matrix(n, rng, 0.6), random_matrix(n, rng, 0.3),
                          random_vector(n, rng, 0.5));
    default:
      return harmonic_field(harmonic(rng), random_matrix(n, rng, 0.6),
                            random_vector(n, rng, 0.5));
  }
}

}  // namespace loopkahler
