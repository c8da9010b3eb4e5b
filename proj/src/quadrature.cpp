#include "pfluid/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pfluid {
namespace {

constexpr double kPi = 3.14159265358979323846;

void add_point(QuadratureRule& rule, std::array<double, 4> bary, double weight) {
  rule.barycentric.push_back(bary);
  rule.weights.push_back(weight);
}

// Conical (collapsed) product of Gauss-Legendre rules; positive weights, any degree.
QuadratureRule collapsed_rule(int dim, int degree) {
  QuadratureRule rule;
  rule.dim = dim;
  rule.degree = degree;
  const int n = (degree + dim + 2) / 2;
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  if (dim == 2) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double u = x[i];
        const double v = x[j] * (1.0 - u);
        add_point(rule, {1.0 - u - v, u, v, 0.0}, w[i] * w[j] * (1.0 - x[i]));
      }
    }
  } else {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          const double u = x[i];
          const double v = x[j] * (1.0 - u);
          const double z = x[k] * (1.0 - x[j]) * (1.0 - u);
          const double jac = (1.0 - x[i]) * (1.0 - x[i]) * (1.0 - x[j]);
          add_point(rule, {1.0 - u - v - z, u, v, z}, w[i] * w[j] * w[k] * jac);
        }
      }
    }
  }
  return rule;
}

// Orbit of (a, a, b) in 2D barycentric coordinates.
void add_orbit3(QuadratureRule& rule, double a, double weight) {
  const double b = 1.0 - 2.0 * a;
  add_point(rule, {a, a, b, 0.0}, weight);
  add_point(rule, {a, b, a, 0.0}, weight);
  add_point(rule, {b, a, a, 0.0}, weight);
}

}  // namespace

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // Map [-1, 1] -> [0, 1].
    nodes[i] = 0.5 * (1.0 - z);
    weights[i] = 1.0 / ((1.0 - z * z) * dp * dp);
  }
}

QuadratureRule quadrature(int dim, int degree) {
  if (dim != 2 && dim != 3) {
    throw std::invalid_argument("quadrature: dim must be 2 or 3");
  }
  if (degree < 0 || degree > kMaxQuadratureDegree) {
    throw std::invalid_argument("quadrature: unsupported degree " + std::to_string(degree) +
                                " (supported 0.." + std::to_string(kMaxQuadratureDegree) + ")");
  }

  QuadratureRule rule;
  rule.dim = dim;
  rule.degree = degree;
  if (degree <= 1) {
    const double c = 1.0 / (dim + 1);
    add_point(rule, {c, c, c, dim == 3 ? c : 0.0}, dim == 2 ? 0.5 : 1.0 / 6.0);
    return rule;
  }
  if (dim == 2 && degree == 2) {
    add_orbit3(rule, 1.0 / 6.0, 1.0 / 6.0);
    return rule;
  }
  if (dim == 2 && degree <= 5) {
    // Radon's seven-point rule.
    const double s = std::sqrt(15.0);
    add_point(rule, {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.0}, 0.5 * 9.0 / 40.0);
    add_orbit3(rule, (6.0 - s) / 21.0, 0.5 * (155.0 - s) / 1200.0);
    add_orbit3(rule, (6.0 + s) / 21.0, 0.5 * (155.0 + s) / 1200.0);
    rule.degree = 5;
    return rule;
  }
  if (dim == 3 && degree == 2) {
    const double a = (5.0 - std::sqrt(5.0)) / 20.0;
    const double b = 1.0 - 3.0 * a;
    add_point(rule, {b, a, a, a}, 1.0 / 24.0);
    add_point(rule, {a, b, a, a}, 1.0 / 24.0);
    add_point(rule, {a, a, b, a}, 1.0 / 24.0);
    add_point(rule, {a, a, a, b}, 1.0 / 24.0);
    return rule;
  }
  return collapsed_rule(dim, degree);
}

}  // namespace pfluid
