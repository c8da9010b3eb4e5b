#pragma once

#include <array>
#include <vector>

namespace pfluid {

/// Quadrature rule on the reference simplex conv{0, e_1, ..., e_d}. Points are
/// stored as barycentric coordinates (λ_0, ..., λ_d); weights sum to the
/// reference volume 1/d!.
struct QuadratureRule {
  int dim = 0;
  int degree = 0;
  std::vector<std::array<double, 4>> barycentric;
  std::vector<double> weights;

  int size() const { return static_cast<int>(weights.size()); }
};

inline constexpr int kMaxQuadratureDegree = 6;

/// Rule exact for polynomials of total degree `degree` on the simplex, with
/// positive weights. Supported: dim in {2, 3}, 0 <= degree <= 6.
QuadratureRule quadrature(int dim, int degree);

/// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace pfluid
