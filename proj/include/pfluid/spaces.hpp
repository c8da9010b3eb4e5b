#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "pfluid/mesh.hpp"
#include "pfluid/quadrature.hpp"
#include "pfluid/tensor.hpp"

namespace pfluid {

/// Default quadrature degree for every assembled form and error norm.
inline constexpr int kAssemblyQuadratureDegree = 5;

/// Value and gradient ([∇w]_ij = ∂_j w_i) of a vector field at a point.
struct FieldSample {
  Vec value;
  Mat gradient;
};

using VectorField = std::function<FieldSample(const Vec& x)>;
using ScalarField = std::function<double(const Vec& x)>;

/// Affine element map data: |K| and the constant gradients of the barycentric
/// coordinates (row a holds ∇λ_a).
struct ElementGeometry {
  double volume = 0.0;
  Vec origin;
  Mat jacobian;
  Eigen::Matrix<double, 4, 3> grad_lambda;
};

/// Taylor-Hood pair on a periodic mesh: continuous P2 vectors for the
/// velocity and continuous P1 scalars for the pressure.
///
/// Scalar P2 nodes are the mesh vertices followed by the periodic edges.
/// Velocity dof of component c at node z is c * num_p2_nodes() + z; the
/// pressure dof of vertex v is v.
class TaylorHoodSpace {
 public:
  explicit TaylorHoodSpace(const PeriodicMesh& mesh, int quadrature_degree = kAssemblyQuadratureDegree);

  const PeriodicMesh& mesh() const { return *mesh_; }
  int dim() const { return mesh_->dim(); }
  int num_elements() const { return mesh_->num_simplices(); }

  int num_p2_nodes() const { return num_p2_nodes_; }
  int num_p1_nodes() const { return mesh_->num_vertices(); }
  int num_velocity_dofs() const { return dim() * num_p2_nodes_; }
  int num_pressure_dofs() const { return num_p1_nodes(); }

  /// Local P2 node count: 6 (triangle) or 10 (tetrahedron).
  int p2_per_element() const { return p2_local_; }
  int p1_per_element() const { return dim() + 1; }

  /// Global P2 node of local node i of element K. Local order: vertices, then
  /// edges (0,1), (0,2), ..., (d-1,d).
  int p2_node(int k, int i) const { return p2_nodes_[k * p2_local_ + i]; }
  int velocity_dof(int component, int node) const { return component * num_p2_nodes_ + node; }

  /// Local vertex pair spanning local edge e.
  std::array<int, 2> local_edge(int e) const { return edges_[e]; }
  int num_local_edges() const { return static_cast<int>(edges_.size()); }

  const ElementGeometry& geometry(int k) const { return geometry_[k]; }
  const QuadratureRule& rule() const { return rule_; }
  /// Factor mapping reference weights to K: |K| d!.
  double weight_scale(int k) const { return geometry_[k].volume * (dim() == 2 ? 2.0 : 6.0); }

  /// Physical (unwrapped) point with barycentric coordinates `bary` in K.
  Vec point(int k, const std::array<double, 4>& bary) const;

  /// P2 shape values and gradients at barycentric point `bary` of K.
  void p2_basis(int k, const std::array<double, 4>& bary, double* values,
                Eigen::Matrix<double, 10, 3>& gradients) const;

  /// Coordinates of every P2 node in [0, 2π)^d (edges: midpoint of an
  /// unwrapped representative).
  const std::vector<Vec>& p2_node_points() const { return node_points_; }

 private:
  const PeriodicMesh* mesh_;
  int p2_local_ = 0;
  int num_p2_nodes_ = 0;
  std::vector<std::array<int, 2>> edges_;
  std::vector<int> p2_nodes_;
  std::vector<ElementGeometry> geometry_;
  std::vector<Vec> node_points_;
  QuadratureRule rule_;
};

/// Coefficient vector tied to one of the two spaces.
enum class FieldKind { Velocity, Pressure };

struct FEFunction {
  const TaylorHoodSpace* space = nullptr;
  FieldKind kind = FieldKind::Velocity;
  Eigen::VectorXd coeffs;

  static FEFunction zero(const TaylorHoodSpace& space, FieldKind kind);
};

/// Pointwise evaluation helpers on element K at barycentric point `bary`.
Vec velocity_value(const FEFunction& u, int k, const std::array<double, 4>& bary);
Mat velocity_gradient(const FEFunction& u, int k, const std::array<double, 4>& bary);
double pressure_value(const FEFunction& q, int k, const std::array<double, 4>& bary);

/// Element-local velocity evaluation reusing a tabulated basis.
struct VelocityAtPoint {
  Vec value;
  Mat gradient;
};
VelocityAtPoint evaluate_velocity(const FEFunction& u, int k, const double* values,
                                  const Eigen::Matrix<double, 10, 3>& gradients);

/// Nodal interpolants.
FEFunction interpolate_velocity(const TaylorHoodSpace& space, const VectorField& w);
FEFunction interpolate_pressure(const TaylorHoodSpace& space, const ScalarField& q);

/// ∫_Ω of each velocity component, or of the pressure.
Vec velocity_mean_integral(const FEFunction& u);
double pressure_integral(const FEFunction& q);

/// ‖u‖₂ (velocity) or ‖q‖₂ (pressure) with the space's quadrature rule.
double l2_norm(const FEFunction& u);

/// Calls fn(k, q, x, weight) for every quadrature point of every element;
/// `weight` already includes the element scaling.
template <class Fn>
void for_each_quadrature_point(const TaylorHoodSpace& space, Fn&& fn) {
  const QuadratureRule& rule = space.rule();
  for (int k = 0; k < space.num_elements(); ++k) {
    const double scale = space.weight_scale(k);
    for (int q = 0; q < rule.size(); ++q) {
      fn(k, q, space.point(k, rule.barycentric[q]), rule.weights[q] * scale);
    }
  }
}

/// Norms of w - u_h for a velocity field: ‖·‖₂, ‖∇·‖_r and ‖D·‖_r.
struct VelocityErrorNorms {
  double l2 = 0.0;
  double grad_r = 0.0;
  double sym_grad_r = 0.0;
};

VelocityErrorNorms velocity_error(const FEFunction& uh, const VectorField& w, double r);

/// Norms of a velocity field itself: ‖w‖₂ and ‖∇w‖_r.
VelocityErrorNorms field_norms(const TaylorHoodSpace& space, const VectorField& w, double r);

/// ‖q - q_h‖₂ for a pressure-space function.
double pressure_l2_error(const FEFunction& qh, const ScalarField& q);

}  // namespace pfluid
