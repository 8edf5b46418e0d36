#include <doctest.h>

#include <random>

#include "helpers.hpp"

using namespace lktest;

namespace {

// Finite-difference oracle for ∂h_ij/∂z_k and ∂h_ij/∂z̄_k built only from
// metric() evaluations.
MetricDerivs fd_metric_derivs(const KahlerModel& m, const ChartPoint& p, double step = 1e-6) {
  const int n = m.dim();
  MetricDerivs d;
  d.dz.resize(n);
  d.dzbar.resize(n);
  for (int k = 0; k < n; ++k) {
    const double s = step * (1.0 + std::abs(p.coords[k]));
    ChartPoint q = p;
    q.coords[k] = p.coords[k] + s;
    const Mat hxp = m.metric(q);
    q.coords[k] = p.coords[k] - s;
    const Mat hxm = m.metric(q);
    q.coords[k] = p.coords[k] + cplx(0, s);
    const Mat hyp = m.metric(q);
    q.coords[k] = p.coords[k] - cplx(0, s);
    const Mat hym = m.metric(q);
    const Mat dx = (hxp - hxm) / (2 * s);
    const Mat dy = (hyp - hym) / (2 * s);
    d.dz[k] = 0.5 * (dx - cplx(0, 1) * dy);
    d.dzbar[k] = 0.5 * (dx + cplx(0, 1) * dy);
  }
  return d;
}

// Hermitian model with a cubic potential term; non-Kähler and genuinely
// nonlinear in z, used to exercise the Stokes oracle away from the
// constant-derivative case.
ModelPtr cubic_test_model() {
  return std::make_shared<CallbackHermitianModel>(
      "cubic-test", 2,
      [](const Vec& z) {
        Mat h = Mat::Identity(2, 2);
        h(0, 0) = 1.0 + 0.1 * z[1].real() + 0.05 * std::norm(z[1]);
        h(1, 1) = 1.0 + 0.05 * z[0].imag() * z[0].imag();
        return h;
      });
}

}  // namespace

TEST_CASE("flat model: identity metric examples") {
  FlatModel m(1);
  const ChartPoint z0 = pt({0.0});
  CHECK(h_inner(m, tv(z0, {1.0}), tv(z0, {1.0})) == cplx(1.0, 0.0));
  CHECK(h_inner(m, tv(z0, {0.0}), tv(z0, {0.0})) == cplx(0.0, 0.0));
  // ω(u, v) with u = 1, v = i: −Im(1·conj(i)) = 1.
  CHECK(omega_eval(m, tv(z0, {1.0}), tv(z0, {cplx(0, 1)})) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("fubini-study metric matches the dd^c potential oracle at the origin") {
  FubiniStudyModel m(1);
  // Oracle: h11 = ∂²/∂z∂z̄ ln(1+|z|²) = (1/4)Δ ln(1+x²+y²) at 0 by central FD.
  const auto phi = [](double x, double y) { return std::log(1.0 + x * x + y * y); };
  const double s = 1e-4;
  const double lap =
      (phi(s, 0) + phi(-s, 0) + phi(0, s) + phi(0, -s) - 4.0 * phi(0, 0)) / (s * s);
  const double oracle = 0.25 * lap;
  const ChartPoint z0 = pt({0.0});
  const cplx h = h_inner(m, tv(z0, {1.0}), tv(z0, {1.0}));
  CHECK(std::abs(h - oracle) <= 1e-6);
  CHECK(std::abs(h - 1.0) <= 1e-12);  // frozen closed form
}

TEST_CASE("fubini-study omega at z=1 against the direct wedge oracle") {
  FubiniStudyModel m(1);
  const ChartPoint z1 = pt({1.0});
  const TangentVec u = tv(z1, {1.0});
  const TangentVec v = tv(z1, {cplx(0, 1)});
  // Oracle: ω = (i/2) h₁₁ dz∧dz̄ evaluated on the pair directly.
  const cplx h11 = m.metric(z1)(0, 0);
  const cplx wedge = u.components[0] * std::conj(v.components[0]) -
                     v.components[0] * std::conj(u.components[0]);
  const double oracle = (0.5 * cplx(0, 1) * h11 * wedge).real();
  CHECK(omega_eval(m, u, v) == doctest::Approx(oracle).epsilon(1e-14));
  CHECK(omega_eval(m, u, v) == doctest::Approx(0.25).epsilon(1e-14));  // h₁₁(1) = 1/4
}

TEST_CASE("metric invariants: hermitian symmetry, positivity, derivative consistency") {
  std::mt19937_64 rng(17);
  const std::vector<ModelPtr> models = {make_model("flat-cn", 3), make_model("fubini-study-p1"),
                                        make_model("fubini-study-pn", 4),
                                        make_model("perturbed-hermitian"), cubic_test_model()};
  for (const ModelPtr& m : models) {
    for (int it = 0; it < 20; ++it) {
      const ChartPoint z = rand_point(m->dim(), rng);
      const Mat h = m->metric(z);
      CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
      const Eigen::SelfAdjointEigenSolver<Mat> es(h);
      CHECK(es.eigenvalues().minCoeff() > 0.0);
      const MetricDerivs da = m->metric_derivs(z);
      const MetricDerivs df = fd_metric_derivs(*m, z);
      for (int k = 0; k < m->dim(); ++k) {
        const double scale = 1.0 + df.dz[k].cwiseAbs().maxCoeff();
        CHECK((da.dz[k] - df.dz[k]).cwiseAbs().maxCoeff() / scale <= 1e-6);
        CHECK((da.dzbar[k] - df.dzbar[k]).cwiseAbs().maxCoeff() / scale <= 1e-6);
      }
    }
  }
}

TEST_CASE("h_inner conjugate symmetry and J-compatibility of omega") {
  std::mt19937_64 rng(23);
  const auto m = make_model("fubini-study-pn", 3);
  for (int it = 0; it < 50; ++it) {
    const ChartPoint z = rand_point(3, rng);
    const TangentVec u{z, rand_cvec(3, rng)};
    const TangentVec v{z, rand_cvec(3, rng)};
    const cplx huv = h_inner(*m, u, v);
    const cplx hvu = h_inner(*m, v, u);
    CHECK(std::abs(huv - std::conj(hvu)) <= 1e-14);
    CHECK(h_inner(*m, u, u).imag() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(h_inner(*m, u, u).real() >= 0.0);
    // omega is antisymmetric and ω(u, iu) = h(u,u).
    CHECK(omega_eval(*m, u, u) == 0.0);
    const TangentVec ju{z, Vec(cplx(0, 1) * u.components)};
    CHECK(omega_eval(*m, u, ju) ==
          doctest::Approx(h_inner(*m, u, u).real()).epsilon(1e-13));
    CHECK(std::abs(omega_eval(*m, u, v) + omega_eval(*m, v, u)) <= 1e-14);
  }
}

TEST_CASE("chart transition consistency on the overlap") {
  std::mt19937_64 rng(31);
  SUBCASE("p1") {
    FubiniStudyModel m(1);
    for (int it = 0; it < 30; ++it) {
      std::uniform_real_distribution<double> rad(0.6, 1.8), ang(0.0, kTwoPi);
      const double r = rad(rng), a = ang(rng);
      const ChartPoint z = pt({r * cplx(std::cos(a), std::sin(a))});
      const TangentVec u{z, rand_cvec(1, rng)};
      const TangentVec v{z, rand_cvec(1, rng)};
      const TangentVec u1 = m.pushforward_to_chart(u, 1);
      const TangentVec v1 = m.pushforward_to_chart(v, 1);
      const cplx a0 = h_inner(m, u, v);
      const cplx a1 = h_inner(m, u1, v1);
      CHECK(std::abs(a0 - a1) / (1.0 + std::abs(a0)) <= 1e-9);
      CHECK(omega_eval(m, u, v) == doctest::Approx(omega_eval(m, u1, v1)).epsilon(1e-9));
      // distances agree between chart representations too
      const ChartPoint w = pt({r * cplx(std::cos(a + 0.3), std::sin(a + 0.3))});
      CHECK(fs_distance(m, z, w) ==
            doctest::Approx(fs_distance(m, m.to_chart(z, 1), w)).epsilon(1e-12));
    }
  }
  SUBCASE("pn") {
    FubiniStudyModel m(3);
    for (int it = 0; it < 20; ++it) {
      ChartPoint z = rand_point(3, rng, 1.2);
      z.coords[1] += 1.0;  // make chart 2 (= homogeneous index of coord 1) usable
      const TangentVec u{z, rand_cvec(3, rng)};
      const TangentVec v{z, rand_cvec(3, rng)};
      const int target = 2;
      const TangentVec u2 = m.pushforward_to_chart(u, target);
      const TangentVec v2 = m.pushforward_to_chart(v, target);
      const cplx a0 = h_inner(m, u, v);
      const cplx a2 = h_inner(m, u2, v2);
      CHECK(std::abs(a0 - a2) / (1.0 + std::abs(a0)) <= 1e-9);
    }
  }
}

TEST_CASE("d_omega_eval vanishes on Kähler models") {
  std::mt19937_64 rng(41);
  const std::vector<ModelPtr> models = {make_model("flat-cn", 2), make_model("fubini-study-p1"),
                                        make_model("fubini-study-pn", 3)};
  for (const ModelPtr& m : models) {
    for (int it = 0; it < 100; ++it) {
      const ChartPoint z = rand_point(m->dim(), rng);
      const TangentVec u{z, rand_cvec(m->dim(), rng)};
      const TangentVec v{z, rand_cvec(m->dim(), rng)};
      const TangentVec w{z, rand_cvec(m->dim(), rng)};
      CHECK(std::abs(d_omega_eval(*m, u, v, w)) <= 1e-9);
    }
  }
}

TEST_CASE("d_omega_eval on the perturbed model: frozen triple and Stokes oracle") {
  PerturbedHermitianModel m;
  const ChartPoint z0 = pt({0.0, 0.0});
  const TangentVec e1 = tv(z0, {1.0, 0.0});
  const TangentVec e2 = tv(z0, {0.0, 1.0});
  const TangentVec ie1 = tv(z0, {cplx(0, 1), 0.0});
  const double val = d_omega_eval(m, e1, e2, ie1);
  // dω = (i/2)(ε/2)(dz₂+dz̄₂)∧dz₁∧dz̄₁ evaluated on (e₁,e₂,ie₁) = −ε.
  CHECK(val == doctest::Approx(-0.1).epsilon(1e-12));
  CHECK(val == doctest::Approx(stokes_cell_domega(m, z0, e1.components, e2.components,
                                                  ie1.components))
                   .epsilon(1e-10));
}

TEST_CASE("d_omega_eval is fully antisymmetric") {
  std::mt19937_64 rng(43);
  PerturbedHermitianModel m;
  for (int it = 0; it < 30; ++it) {
    const ChartPoint z = rand_point(2, rng);
    const Vec a = rand_cvec(2, rng), b = rand_cvec(2, rng), c = rand_cvec(2, rng);
    const auto d = [&](const Vec& x, const Vec& y, const Vec& w) {
      return d_omega_eval(m, {z, x}, {z, y}, {z, w});
    };
    const double base = d(a, b, c);
    CHECK(d(b, a, c) == doctest::Approx(-base).epsilon(1e-12));
    CHECK(d(a, c, b) == doctest::Approx(-base).epsilon(1e-12));
    CHECK(d(c, b, a) == doctest::Approx(-base).epsilon(1e-12));
    CHECK(std::abs(d(a, a, c)) <= 1e-15);
  }
}

TEST_CASE("d_omega_eval matches the Stokes-cell oracle at random sites") {
  std::mt19937_64 rng(47);
  for (const ModelPtr m : {make_model("perturbed-hermitian"), cubic_test_model()}) {
    for (int it = 0; it < 20; ++it) {
      const ChartPoint z = rand_point(2, rng, 0.5);
      const Vec u = rand_cvec(2, rng), v = rand_cvec(2, rng), w = rand_cvec(2, rng);
      const double ana = d_omega_eval(*m, {z, u}, {z, v}, {z, w});
      const double fd = stokes_cell_domega(*m, z, u, v, w);
      CHECK(std::abs(ana - fd) <= 1e-4 * (1.0 + std::abs(fd)));
    }
  }
}

TEST_CASE("christoffels: flat zeros, fubini-study values and symmetry") {
  SUBCASE("flat") {
    FlatModel m(3);
    std::mt19937_64 rng(53);
    const auto gamma = christoffels(m, rand_point(3, rng));
    for (const Mat& g : gamma) CHECK(g.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("p1 at the origin") {
    FubiniStudyModel m(1);
    CHECK(std::abs(christoffels(m, pt({0.0}))[0](0, 0)) <= 1e-15);
  }
  SUBCASE("p1 at z=1 against the FD-of-h oracle") {
    FubiniStudyModel m(1);
    const ChartPoint z1 = pt({1.0});
    // Oracle: Γ = h₁₁⁻¹ ∂h₁₁/∂z from finite differences of the metric alone.
    const MetricDerivs fd = fd_metric_derivs(m, z1);
    const cplx oracle = fd.dz[0](0, 0) / m.metric(z1)(0, 0);
    const cplx got = christoffels(m, z1)[0](0, 0);
    CHECK(std::abs(got - oracle) <= 1e-6);
    CHECK(std::abs(got - cplx(-1.0, 0.0)) <= 1e-12);  // −2 z̄/(1+|z|²) at z = 1
  }
  SUBCASE("symmetry in the lower indices") {
    FubiniStudyModel m(3);
    std::mt19937_64 rng(59);
    for (int it = 0; it < 10; ++it) {
      const auto gamma = christoffels(m, rand_point(3, rng));
      for (const Mat& g : gamma) {
        CHECK((g - g.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
      }
    }
  }
  SUBCASE("refused on non-Kähler models") {
    PerturbedHermitianModel m;
    CHECK_THROWS_AS(christoffels(m, pt({0.0, 0.0})), std::domain_error);
  }
  SUBCASE("singular metric reports a numeric error") {
    CallbackHermitianModel m("degenerate", 1, [](const Vec& z) {
      Mat h(1, 1);
      h(0, 0) = std::norm(z[0]);  // vanishes at the origin
      return h;
    });
    CHECK_THROWS_AS(christoffels(m, pt({0.0})), std::runtime_error);
  }
}

TEST_CASE("pointwise error paths") {
  FubiniStudyModel m(1);
  const ChartPoint a = pt({0.2});
  const ChartPoint b = pt({0.3});
  CHECK_THROWS_AS(h_inner(m, tv(a, {1.0}), tv(b, {1.0})), std::invalid_argument);
  // the chart-0 origin is the pole of chart 1
  CHECK_THROWS_AS(m.to_chart(pt({0.0}), 1), std::domain_error);
  ChartPoint bad = pt({1.0});
  bad.chart_id = 7;
  CHECK_THROWS_AS(m.validate_point(bad), std::domain_error);
  ChartPoint inf = pt({1.0});
  inf.coords[0] = cplx(std::numeric_limits<double>::infinity(), 0.0);
  CHECK_THROWS_AS(m.validate_point(inf), std::domain_error);
  CHECK_THROWS_AS(make_model("no-such-model"), std::invalid_argument);
}
