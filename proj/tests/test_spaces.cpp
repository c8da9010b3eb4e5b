#include <cmath>

#include "doctest.h"
#include "pfluid/spaces.hpp"

using namespace pfluid;

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

// ∫ over the reference simplex of x^a y^b z^c.
double reference_moment(int dim, int a, int b, int c) {
  if (dim == 2) return factorial(a) * factorial(b) / factorial(a + b + 2);
  return factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 3);
}

double rule_moment(const QuadratureRule& r, int a, int b, int c) {
  double s = 0.0;
  for (int q = 0; q < r.size(); ++q) {
    const auto& l = r.barycentric[q];
    s += r.weights[q] * std::pow(l[1], a) * std::pow(l[2], b) * (r.dim == 3 ? std::pow(l[3], c) : 1.0);
  }
  return s;
}

}  // namespace

TEST_CASE("quadrature exactness and positivity") {
  for (int dim : {2, 3}) {
    for (int deg = 0; deg <= kMaxQuadratureDegree; ++deg) {
      const QuadratureRule r = quadrature(dim, deg);
      double sum = 0.0;
      for (double w : r.weights) {
        CHECK(w > 0.0);
        sum += w;
      }
      CHECK(sum == doctest::Approx(1.0 / factorial(dim)).epsilon(1e-14));
      for (int a = 0; a <= deg; ++a)
        for (int b = 0; a + b <= deg; ++b)
          for (int c = 0; a + b + c <= deg; ++c) {
            if (dim == 2 && c > 0) continue;
            INFO("dim=" << dim << " deg=" << deg << " monomial " << a << b << c);
            CHECK(rule_moment(r, a, b, c) ==
                  doctest::Approx(reference_moment(dim, a, b, c)).epsilon(1e-13));
          }
    }
  }
  // x²y³ with the degree-5 rule on the reference triangle: 2!3!/7! = 1/420.
  CHECK(rule_moment(quadrature(2, 5), 2, 3, 0) == doctest::Approx(1.0 / 420.0).epsilon(1e-14));
  CHECK_THROWS_AS(quadrature(2, 7), std::invalid_argument);
  CHECK_THROWS_AS(quadrature(1, 2), std::invalid_argument);
}

TEST_CASE("taylor-hood dof counts") {
  const PeriodicMesh m2 = build_structured(2, 4);
  const TaylorHoodSpace s2(m2);
  // Vertices n², edges 3n² on the periodic Kuhn grid.
  CHECK(s2.num_p2_nodes() == 16 + 48);
  CHECK(s2.num_velocity_dofs() == 2 * 64);
  CHECK(s2.num_pressure_dofs() == 16);

  const PeriodicMesh m3 = build_structured(3, 3);
  const TaylorHoodSpace s3(m3);
  // Edges of the 3D Kuhn grid: 7 per cell.
  CHECK(s3.num_p2_nodes() == 27 + 7 * 27);

  const PeriodicMesh tiny = build_structured(2, 2);
  const TaylorHoodSpace st(tiny);
  CHECK(st.num_p2_nodes() == 4 + 12);
}

TEST_CASE("interpolation reproduces quadratics and is continuous") {
  for (int dim : {2, 3}) {
    const PeriodicMesh m = build_structured(dim, dim == 2 ? 4 : 2);
    const TaylorHoodSpace s(m);
    // Trigonometric field: nodal values agree on every element sharing a node,
    // so evaluating at element vertices reproduces the field there.
    auto w = [dim](const Vec& x) {
      FieldSample f{Vec::Zero(dim), Mat::Zero(dim, dim)};
      for (int c = 0; c < dim; ++c) f.value[c] = std::sin(x[(c + 1) % dim]) + 0.3 * c;
      return f;
    };
    const FEFunction u = interpolate_velocity(s, w);
    int bad = 0;
    for (int k = 0; k < m.num_simplices(); ++k) {
      for (int a = 0; a <= dim; ++a) {
        std::array<double, 4> bary{0, 0, 0, 0};
        bary[a] = 1.0;
        const Vec v = velocity_value(u, k, bary);
        const Vec exact = w(m.vertex(m.simplex_vertex(k, a))).value;
        if ((v - exact).norm() > 1e-13) ++bad;
      }
      // Edge midpoint from both sides.
      for (int e = 0; e < s.num_local_edges(); ++e) {
        std::array<double, 4> bary{0, 0, 0, 0};
        bary[s.local_edge(e)[0]] = 0.5;
        bary[s.local_edge(e)[1]] = 0.5;
        const Vec v = velocity_value(u, k, bary);
        const Vec exact = w(s.point(k, bary)).value;
        if ((v - exact).norm() > 1e-13) ++bad;
      }
    }
    CHECK(bad == 0);
  }

  const PeriodicMesh m = build_structured(2, 4);
  const TaylorHoodSpace s(m);
  // Periodic quadratics do not exist beyond constants; locally, a P2 element
  // with nodal data of a quadratic reproduces its gradient.
  const FEFunction one = interpolate_velocity(s, [](const Vec&) {
    FieldSample f{Vec::Constant(2, 1.0), Mat::Zero(2, 2)};
    return f;
  });
  CHECK(velocity_mean_integral(one)[0] == doctest::Approx(kTwoPi * kTwoPi).epsilon(1e-13));
  CHECK(l2_norm(one) == doctest::Approx(std::sqrt(2.0) * kTwoPi).epsilon(1e-13));
  const FEFunction q = interpolate_pressure(s, [](const Vec&) { return 2.0; });
  CHECK(pressure_integral(q) == doctest::Approx(2.0 * kTwoPi * kTwoPi).epsilon(1e-13));
  CHECK(velocity_gradient(one, 3, {0.2, 0.3, 0.5, 0}).norm() < 1e-13);
}

TEST_CASE("local basis gradients match finite differences") {
  const PeriodicMesh m = build_structured(3, 2);
  const TaylorHoodSpace s(m);
  const int k = 5;
  const std::array<double, 4> bary{0.1, 0.2, 0.3, 0.4};
  double v0[10], vp[10], vm[10];
  Eigen::Matrix<double, 10, 3> g0, gtmp;
  s.p2_basis(k, bary, v0, g0);
  const ElementGeometry& geo = s.geometry(k);
  const double h = 1e-6;
  for (int j = 0; j < 3; ++j) {
    // Barycentric coordinates of x ± h e_j.
    std::array<double, 4> bp = bary, bm = bary;
    for (int a = 0; a < 4; ++a) {
      bp[a] += h * geo.grad_lambda(a, j);
      bm[a] -= h * geo.grad_lambda(a, j);
    }
    s.p2_basis(k, bp, vp, gtmp);
    s.p2_basis(k, bm, vm, gtmp);
    for (int i = 0; i < 10; ++i) CHECK((vp[i] - vm[i]) / (2 * h) == doctest::Approx(g0(i, j)).epsilon(1e-7));
  }
}

TEST_CASE("error norms vanish for interpolated polynomials") {
  const PeriodicMesh m = build_structured(2, 4);
  const TaylorHoodSpace s(m);
  auto c = [](const Vec&) { return FieldSample{(Vec(2) << 1.0, -2.0).finished(), Mat::Zero(2, 2)}; };
  const FEFunction u = interpolate_velocity(s, c);
  const VelocityErrorNorms e = velocity_error(u, c, 1.5);
  CHECK(e.l2 < 1e-13);
  CHECK(e.grad_r < 1e-13);
}
