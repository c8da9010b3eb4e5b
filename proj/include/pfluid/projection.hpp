#pragma once

#include <functional>
#include <vector>

#include "pfluid/linalg.hpp"
#include "pfluid/spaces.hpp"

namespace pfluid {

// Global matrices of the Taylor-Hood pair. Velocity rows/columns follow
// TaylorHoodSpace::velocity_dof, pressure rows/columns the vertex ids.

SparseMatrix velocity_mass_matrix(const TaylorHoodSpace& space);
/// ⟨∇φ_i, ∇φ_j⟩ summed over components.
SparseMatrix velocity_stiffness_matrix(const TaylorHoodSpace& space);
SparseMatrix pressure_mass_matrix(const TaylorHoodSpace& space);
/// B(a, i) = ⟨div φ_i, ψ_a⟩.
SparseMatrix divergence_matrix(const TaylorHoodSpace& space);
/// ∫ ψ_a for each pressure basis function.
Eigen::VectorXd pressure_basis_integrals(const TaylorHoodSpace& space);
/// Column c holds ∫ φ_i e_c for every velocity dof i.
Eigen::MatrixXd velocity_basis_integrals(const TaylorHoodSpace& space);

/// ⟨div w, ψ_a⟩ for every pressure basis function.
Eigen::VectorXd divergence_moments(const TaylorHoodSpace& space, const VectorField& w);
Eigen::VectorXd divergence_moments(const FEFunction& w);

/// Divergence-preserving projection onto the velocity space: the L²-closest
/// v_h subject to ⟨div v_h, η_h⟩ = ⟨div w, η_h⟩ for all pressure functions
/// η_h. The saddle-point factorization is computed once per space.
class DivergenceProjector {
 public:
  explicit DivergenceProjector(const TaylorHoodSpace& space);

  FEFunction apply(const VectorField& w) const;
  FEFunction apply(const FEFunction& w) const;

  const TaylorHoodSpace& space() const { return *space_; }

 private:
  FEFunction solve(const Eigen::VectorXd& load, const Eigen::VectorXd& moments) const;

  const TaylorHoodSpace* space_;
  SparseDirectSolver solver_;
};

FEFunction pi_div(const TaylorHoodSpace& space, const VectorField& w);

/// Scalar field that may depend on the element (piecewise data).
using ElementScalarField = std::function<double(int k, const Vec& x)>;

/// Clément-type quasi-interpolant into the pressure space: the value at
/// vertex z is ∫ q ψ_z / ∫ ψ_z over the support of ψ_z.
FEFunction pi_y(const TaylorHoodSpace& space, const ElementScalarField& q);
FEFunction pi_y(const TaylorHoodSpace& space, const ScalarField& q);

/// max_a |⟨div(w - v_h), ψ_a⟩|.
double divergence_moment_defect(const VectorField& w, const FEFunction& vh);

/// Empirical approximation orders of both projections on a sequence of
/// uniform meshes.
struct ProjectionLevel {
  int n = 0;
  double h = 0.0;
  double div_l2 = 0.0;         // ‖w - Π^div w‖₂
  double div_grad_r = 0.0;     // ‖∇(w - Π^div w)‖_r
  double div_stability = 0.0;  // ‖∇Π^div w‖_r / ‖∇w‖_r
  double y_l2 = 0.0;           // ‖q - Π^Y q‖₂
  double moment_defect = 0.0;
};

struct ProjectionOrderReport {
  std::vector<ProjectionLevel> levels;
  std::vector<double> eoc_div_l2;
  std::vector<double> eoc_div_grad;
  std::vector<double> eoc_y_l2;
  double max_stability = 0.0;
};

ProjectionOrderReport check_projection_orders(int dim, const std::vector<int>& subdivisions,
                                              const VectorField& w, const ScalarField& q,
                                              double r);

/// Discrete inf-sup constant of the pair with respect to the H¹ norm
/// (‖∇v‖² + ‖v‖²) and the L² norm on mean-free pressures. Dense; intended for
/// small meshes.
double inf_sup_constant(const TaylorHoodSpace& space);

}  // namespace pfluid
