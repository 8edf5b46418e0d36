#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "loopkahler/sampling.hpp"

using namespace lktest;

namespace {

Loop constant_loop(const KahlerModel& m, const LoopGrid& grid, const ChartPoint& p) {
  Loop g;
  g.grid = grid;
  g.points.assign(grid.size(), p);
  return g;
}

}  // namespace

TEST_CASE("loop metric: constant loop with constant fields is the pointwise value") {
  FlatModel m(1);
  const LoopGrid grid(64);
  const Loop g = constant_loop(m, grid, pt({0.0}));
  const LoopTangent xi = make_constant_tangent(g, Vec::Ones(1));
  CHECK(loop_metric_H(m, g, xi, xi) == cplx(1.0, 0.0));  // mass-1 measure, exact
}

TEST_CASE("loop metric: pure harmonics integrate to zero exactly") {
  FlatModel m(1);
  const LoopGrid grid(64);
  const Loop g = constant_loop(m, grid, pt({0.0}));
  std::vector<Vec> comp(64);
  for (int j = 0; j < 64; ++j) {
    const double s = grid.node(j);
    comp[j] = Vec::Constant(1, cplx(std::cos(s), std::sin(s)));
  }
  const LoopTangent xi = make_tangent(g, comp);
  const LoopTangent eta = make_constant_tangent(g, Vec::Ones(1));
  CHECK(std::abs(loop_metric_H(m, g, xi, eta)) <= 1e-15);
}

TEST_CASE("loop metric on p1 constant loop reproduces h11(0)") {
  FubiniStudyModel m(1);
  const LoopGrid grid(64);
  const Loop g = constant_loop(m, grid, pt({0.0}));
  const LoopTangent xi = make_constant_tangent(g, Vec::Ones(1));
  const cplx oracle = h_inner(m, {g.points[0], Vec::Ones(1)}, {g.points[0], Vec::Ones(1)});
  CHECK(loop_metric_H(m, g, xi, xi) == doctest::Approx(oracle.real()).epsilon(1e-15));
}

TEST_CASE("loop metric positive-definiteness on random tangents") {
  FubiniStudyModel m(1);
  std::mt19937_64 rng(73);
  const LoopGrid grid(64);
  for (int it = 0; it < 100; ++it) {
    const Loop g = random_loop(m, grid, rng);
    const LoopTangent xi = random_tangent(g, rng);
    double sup = 0.0;
    for (const TangentVec& v : xi.vectors) sup = std::max(sup, v.components.cwiseAbs().maxCoeff());
    if (sup == 0.0) continue;
    const cplx h = loop_metric_H(m, g, xi, xi);
    CHECK(h.real() > 0.0);
    CHECK(std::abs(h.imag()) <= 1e-12);
  }
}

TEST_CASE("loop form equals -Im H and the node-wise quadrature of omega") {
  FubiniStudyModel m(1);
  std::mt19937_64 rng(79);
  const LoopGrid grid(64);
  const Loop g = random_loop(m, grid, rng);
  const LoopTangent xi = random_tangent(g, rng);
  const LoopTangent eta = random_tangent(g, rng);
  const double om = loop_form_Omega(m, g, xi, eta);
  CHECK(om == -loop_metric_H(m, g, xi, eta).imag());
  KahanSum<double> acc;
  for (int j = 0; j < g.size(); ++j) acc.add(omega_eval(m, xi.vectors[j], eta.vectors[j]));
  CHECK(om == doctest::Approx(acc.value() / grid.size()).epsilon(1e-12));
  CHECK(loop_form_Omega(m, g, xi, xi) == 0.0);
  CHECK(loop_form_Omega(m, g, eta, xi) == doctest::Approx(-om).epsilon(1e-13));
}

TEST_CASE("quadrature is spectrally exact and refinement-stable") {
  FlatModel m(1);
  for (const int M : {16, 32, 64}) {
    const LoopGrid grid(M);
    const Loop g = constant_loop(m, grid, pt({0.0}));
    // integrand |ξ|² = |2 + e^{3is}|² = 5 + 4cos(3s): a degree-3 trig polynomial
    std::vector<Vec> comp(M);
    for (int j = 0; j < M; ++j) {
      const double s = grid.node(j);
      comp[j] = Vec::Constant(1, 2.0 + cplx(std::cos(3 * s), std::sin(3 * s)));
    }
    const LoopTangent xi = make_tangent(g, comp);
    CHECK(loop_metric_H(m, g, xi, xi).real() == doctest::Approx(5.0).epsilon(1e-12));
  }

  // doubling M on smooth inputs moves H by <= 1e-10 relative
  FubiniStudyModel fs(1);
  std::mt19937_64 rng(83);
  std::mt19937_64 rng2 = rng;
  const Loop g64 = random_loop(fs, LoopGrid(64), rng);
  const Loop g128 = random_loop(fs, LoopGrid(128), rng2);  // same coefficients, finer grid
  std::mt19937_64 ra(5), rb(5);
  const LoopTangent xi64 = random_tangent(g64, ra);
  const LoopTangent xi128 = random_tangent(g128, rb);
  const double h64 = loop_metric_H(fs, g64, xi64, xi64).real();
  const double h128 = loop_metric_H(fs, g128, xi128, xi128).real();
  CHECK(std::abs(h64 - h128) / std::abs(h64) <= 1e-10);
}

TEST_CASE("sobolev norms") {
  FlatModel m(1);
  const LoopGrid grid(64);
  const Loop g = constant_loop(m, grid, pt({0.0}));

  SUBCASE("constant field: k=1 equals k=0") {
    const LoopTangent xi = make_constant_tangent(g, Vec::Ones(1));
    CHECK(sobolev_norm(m, g, xi, 1) == doctest::Approx(sobolev_norm(m, g, xi, 0)).epsilon(1e-12));
  }
  SUBCASE("pure harmonic: k=0 is 1, k=1 is sqrt(2)") {
    std::vector<Vec> comp(64);
    for (int j = 0; j < 64; ++j) {
      const double s = grid.node(j);
      comp[j] = Vec::Constant(1, cplx(std::cos(s), std::sin(s)));
    }
    const LoopTangent xi = make_tangent(g, comp);
    CHECK(sobolev_norm(m, g, xi, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sobolev_norm(m, g, xi, 1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  }
  SUBCASE("k > 1 unsupported") {
    const LoopTangent xi = make_constant_tangent(g, Vec::Ones(1));
    CHECK_THROWS_AS(sobolev_norm(m, g, xi, 2), std::invalid_argument);
  }
  SUBCASE("covariant correction is active on curved models") {
    FubiniStudyModel fs(1);
    const Loop gc = constant_loop(fs, grid, pt({0.4}));
    std::mt19937_64 rng(89);
    const LoopTangent xi = random_tangent(gc, rng);
    CHECK(std::isfinite(sobolev_norm(fs, gc, xi, 1)));
  }
}

TEST_CASE("raw measure rescales quadratic functionals by exactly 2*pi") {
  FlatModel m(1);
  std::mt19937_64 r1(97), r2(97);
  const Loop gn = random_loop(m, LoopGrid(64, Measure::normalized), r1);
  const Loop gr = random_loop(m, LoopGrid(64, Measure::raw), r2);
  std::mt19937_64 t1(11), t2(11);
  const LoopTangent xin = random_tangent(gn, t1);
  const LoopTangent xir = random_tangent(gr, t2);
  const cplx hn = loop_metric_H(m, gn, xin, xin);
  const cplx hr = loop_metric_H(m, gr, xir, xir);
  CHECK(hr.real() == kTwoPi * hn.real());  // bitwise for power-of-two M
}

TEST_CASE("grid and alignment validation") {
  CHECK_THROWS_AS(LoopGrid(3), std::invalid_argument);
  FlatModel m(1);
  const Loop g = constant_loop(m, LoopGrid(8), pt({0.0}));
  const Loop g2 = constant_loop(m, LoopGrid(16), pt({0.0}));
  const LoopTangent xi = make_constant_tangent(g2, Vec::Ones(1));
  CHECK_THROWS_AS(loop_metric_H(m, g, xi, xi), std::invalid_argument);
  // misaligned base
  LoopTangent bad = make_constant_tangent(g, Vec::Ones(1));
  bad.vectors[3].base.coords[0] += 0.5;
  const LoopTangent good = make_constant_tangent(g, Vec::Ones(1));
  CHECK_THROWS_AS(loop_metric_H(m, g, bad, good), std::invalid_argument);
}
