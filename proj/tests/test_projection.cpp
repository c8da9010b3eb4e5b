#include <cmath>
#include <random>

#include "doctest.h"
#include "pfluid/mesh.hpp"
#include "pfluid/projection.hpp"

using namespace pfluid;

namespace {

FieldSample field_a(const Vec& x) {
  FieldSample f{Vec(2), Mat(2, 2)};
  f.value << std::sin(x[0]) * std::sin(x[1]), std::cos(x[0]) * std::cos(x[1]);
  f.gradient << std::cos(x[0]) * std::sin(x[1]), std::sin(x[0]) * std::cos(x[1]),
      -std::sin(x[0]) * std::cos(x[1]), -std::cos(x[0]) * std::sin(x[1]);
  return f;
}

FieldSample field_b(const Vec& x) {
  FieldSample f{Vec(2), Mat(2, 2)};
  f.value << std::sin(x[1]), std::sin(x[0]);
  f.gradient << 0.0, std::cos(x[1]), std::cos(x[0]), 0.0;
  return f;
}

}  // namespace

TEST_CASE("divergence moments are preserved") {
  const PeriodicMesh m = build_structured(2, 8);
  const TaylorHoodSpace s(m);
  const DivergenceProjector proj(s);
  const FEFunction pa = proj.apply(VectorField(field_a));
  CHECK(divergence_moment_defect(field_a, pa) < 1e-10);
  const FEFunction pb = proj.apply(VectorField(field_b));
  CHECK(divergence_moment_defect(field_b, pb) < 1e-10);
  // Mean preserved: the field has zero mean.
  CHECK(velocity_mean_integral(pa).norm() < 1e-11);
}

TEST_CASE("projection is idempotent on the velocity space") {
  const PeriodicMesh m = build_structured(2, 4);
  const TaylorHoodSpace s(m);
  const DivergenceProjector proj(s);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  FEFunction w = FEFunction::zero(s, FieldKind::Velocity);
  for (int i = 0; i < w.coeffs.size(); ++i) w.coeffs[i] = u(rng);
  const FEFunction pw = proj.apply(w);
  CHECK((pw.coeffs - w.coeffs).cwiseAbs().maxCoeff() < 1e-12);
  const FEFunction ppw = proj.apply(pw);
  CHECK((ppw.coeffs - pw.coeffs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("constant fields are reproduced") {
  for (int dim : {2, 3}) {
    const PeriodicMesh m = build_structured(dim, dim == 2 ? 4 : 2);
    const TaylorHoodSpace s(m);
    auto c = [dim](const Vec&) {
      FieldSample f{Vec::LinSpaced(dim, 1.0, 2.0), Mat::Zero(dim, dim)};
      return f;
    };
    const FEFunction pc = pi_div(s, c);
    CHECK(velocity_error(pc, c, 2.0).l2 < 1e-12);
    const FEFunction py = pi_y(s, [](const Vec&) { return 1.0; });
    CHECK((py.coeffs.array() - 1.0).abs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("clement operator is locally stable") {
  const PeriodicMesh m = build_structured(2, 8);
  const TaylorHoodSpace s(m);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> piece(m.num_simplices());
    for (double& v : piece) v = u(rng);
    const FEFunction py = pi_y(s, ElementScalarField([&](int k, const Vec&) { return piece[k]; }));
    double worst = 0.0;
    for (int k = 0; k < m.num_simplices(); ++k) {
      double lhs = 0.0;
      const QuadratureRule& r = s.rule();
      for (int q = 0; q < r.size(); ++q) {
        const double v = pressure_value(py, k, r.barycentric[q]);
        lhs += r.weights[q] * s.weight_scale(k) * v * v;
      }
      double rhs = 0.0;
      for (int j : patch(m, k).members) rhs += m.volume(j) * piece[j] * piece[j];
      worst = std::max(worst, lhs / rhs);
    }
    CHECK(worst <= 1.0);
  }
}

TEST_CASE("approximation orders") {
  const ProjectionOrderReport r =
      check_projection_orders(2, {8, 16, 32}, field_b, [](const Vec& x) { return std::sin(x[0]); }, 2.0);
  REQUIRE(r.eoc_div_l2.size() == 2);
  for (double e : r.eoc_div_l2) CHECK(e >= 1.8);
  for (double e : r.eoc_div_grad) CHECK(e >= 0.9);
  for (double e : r.eoc_y_l2) CHECK(e >= 0.9);
  CHECK(r.max_stability <= 4.0);
  for (const auto& l : r.levels) CHECK(l.moment_defect < 1e-10);
}

TEST_CASE("inf-sup constant is bounded below under refinement") {
  double prev = 0.0;
  for (int n : {4, 8}) {
    const PeriodicMesh m = build_structured(2, n);
    const TaylorHoodSpace s(m);
    const double beta = inf_sup_constant(s);
    MESSAGE("n=" << n << " beta=" << beta);
    CHECK(beta > 0.1);
    if (prev > 0.0) CHECK(beta > 0.5 * prev);
    prev = beta;
  }
}
