#pragma once

#include <stdexcept>

#include "pfluid/tensor.hpp"

namespace pfluid {

/// Parameters of the power-law extra stress S(A) = μ(δ + |A^sym|)^{p-2} A^sym.
struct PDeltaParams {
  double p = 2.0;
  double delta = 0.0;
  double mu = 1.0;

  /// Throws std::invalid_argument unless p > 1, delta >= 0, mu > 0.
  void validate() const;

  /// p' = p / (p - 1).
  double conjugate_exponent() const { return p / (p - 1.0); }
};

/// Constants C0, C1 of the coercivity and growth bounds of ∂S for the
/// canonical law:
///   C : ∂S(A) : C >= C0 (δ + |A^sym|)^{p-2} |C^sym|²
///   |∂_kl S_ij(A)| <= C1 (δ + |A^sym|)^{p-2}
/// with C0 = μ min(1, p - 1) and C1 = μ max(1, p - 1).
struct Characteristics {
  double c0;
  double c1;
};

Characteristics characteristics(const PDeltaParams& params);

/// ∂S/∂A stored as a dim² x dim² matrix, row (i,j), column (k,l).
class Stress4Tensor {
 public:
  Stress4Tensor() = default;
  Stress4Tensor(int dim, Mat9 entries) : dim_(dim), entries_(std::move(entries)) {}

  int dim() const { return dim_; }
  double operator()(int i, int j, int k, int l) const {
    return entries_(i * dim_ + j, k * dim_ + l);
  }
  const Mat9& entries() const { return entries_; }

  /// (∂S : C)_ij = Σ_kl ∂_kl S_ij C_kl.
  Mat apply(const Mat& c) const;

  /// E : ∂S : C.
  double contract(const Mat& e, const Mat& c) const;

 private:
  int dim_ = 0;
  Mat9 entries_;
};

/// Floor on |A^sym| used by the Jacobian at the degenerate point δ = 0.
inline constexpr double kJacobianFloor = 1e-12;

class DegenerateJacobianError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

Mat stress(const PDeltaParams& params, const Mat& a);

/// Analytic derivative of the canonical law:
///   ∂S = μ(δ+|D|)^{p-2} [ I_sym + (p-2) |D|/(δ+|D|) (D ⊗ D)/|D|² ],  D = A^sym.
/// When δ = 0 and |D| < floor, |D| is replaced by `floor` inside the scalar
/// factors. With floor = 0 such a point raises DegenerateJacobianError.
Stress4Tensor stress_jacobian(const PDeltaParams& params, const Mat& a,
                              double floor = kJacobianFloor);

/// F(A) = (δ + |A^sym|)^{(p-2)/2} A^sym.
Mat f_map(const PDeltaParams& params, const Mat& a);

/// The four members of the equivalence chain
///   (S(P)-S(Q))·(P-Q) ~ |F(P)-F(Q)|² ~ φ_{|P^sym|}(|P^sym-Q^sym|)
///                     ~ φ''(|P^sym|+|Q^sym|) |P^sym-Q^sym|².
struct NaturalDistance {
  double stress_dot = 0.0;
  double f_squared = 0.0;
  double shifted = 0.0;
  double second_order = 0.0;
};

NaturalDistance natural_distance_pointwise(const PDeltaParams& params, const Mat& p,
                                           const Mat& q);

/// x / y, with the convention 0 / 0 = 1.
double equivalence_ratio(double x, double y);

}  // namespace pfluid
