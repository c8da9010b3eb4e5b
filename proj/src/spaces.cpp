#include "pfluid/spaces.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace pfluid {
namespace {

double wrap_coordinate(double x) {
  double y = std::fmod(x, kTwoPi);
  if (y < 0.0) y += kTwoPi;
  if (y >= kTwoPi) y -= kTwoPi;
  return y;
}

void require_kind(const FEFunction& f, FieldKind kind, const char* where) {
  if (f.space == nullptr || f.kind != kind) {
    throw std::invalid_argument(std::string(where) + ": wrong function kind");
  }
}

}  // namespace

TaylorHoodSpace::TaylorHoodSpace(const PeriodicMesh& mesh, int quadrature_degree)
    : mesh_(&mesh), rule_(quadrature(mesh.dim(), quadrature_degree)) {
  const int d = mesh.dim();
  const int nv = d + 1;
  for (int a = 0; a < nv; ++a) {
    for (int b = a + 1; b < nv; ++b) edges_.push_back({a, b});
  }
  p2_local_ = nv + static_cast<int>(edges_.size());

  const int ne = mesh.num_simplices();
  p2_nodes_.resize(static_cast<std::size_t>(ne) * p2_local_);
  std::map<EntityKey, int> edge_ids;
  int next = mesh.num_vertices();
  node_points_.assign(mesh.num_vertices(), Vec());
  for (int v = 0; v < mesh.num_vertices(); ++v) node_points_[v] = mesh.vertex(v);

  geometry_.resize(ne);
  for (int k = 0; k < ne; ++k) {
    for (int a = 0; a < nv; ++a) p2_nodes_[k * p2_local_ + a] = mesh.simplex_vertex(k, a);
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      const auto [a, b] = edges_[e];
      const EntityKey key = mesh.entity_key(k, {a, b});
      auto it = edge_ids.find(key);
      if (it == edge_ids.end()) {
        it = edge_ids.emplace(key, next++).first;
        Vec mid = 0.5 * (mesh.simplex_point(k, a) + mesh.simplex_point(k, b));
        for (int c = 0; c < d; ++c) mid[c] = wrap_coordinate(mid[c]);
        node_points_.push_back(mid);
      }
      p2_nodes_[k * p2_local_ + nv + static_cast<int>(e)] = it->second;
    }

    ElementGeometry& g = geometry_[k];
    g.origin = mesh.simplex_point(k, 0);
    g.jacobian.resize(d, d);
    for (int c = 0; c < d; ++c) g.jacobian.col(c) = mesh.simplex_point(k, c + 1) - g.origin;
    g.volume = mesh.volume(k);
    // λ_{c+1} = (J^{-1}(x - x0))_c, λ_0 = 1 - Σ λ_c.
    const Mat inv = g.jacobian.inverse();
    g.grad_lambda.setZero();
    for (int c = 0; c < d; ++c) {
      for (int j = 0; j < d; ++j) {
        g.grad_lambda(c + 1, j) = inv(c, j);
        g.grad_lambda(0, j) -= inv(c, j);
      }
    }
  }
  num_p2_nodes_ = next;
}

Vec TaylorHoodSpace::point(int k, const std::array<double, 4>& bary) const {
  const int d = dim();
  Vec x = Vec::Zero(d);
  for (int a = 0; a <= d; ++a) x += bary[a] * mesh_->simplex_point(k, a);
  return x;
}

void TaylorHoodSpace::p2_basis(int k, const std::array<double, 4>& bary, double* values,
                               Eigen::Matrix<double, 10, 3>& gradients) const {
  const int d = dim();
  const auto& gl = geometry_[k].grad_lambda;
  for (int a = 0; a <= d; ++a) {
    values[a] = bary[a] * (2.0 * bary[a] - 1.0);
    for (int j = 0; j < d; ++j) gradients(a, j) = (4.0 * bary[a] - 1.0) * gl(a, j);
  }
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto [a, b] = edges_[e];
    const int i = d + 1 + static_cast<int>(e);
    values[i] = 4.0 * bary[a] * bary[b];
    for (int j = 0; j < d; ++j) gradients(i, j) = 4.0 * (bary[a] * gl(b, j) + bary[b] * gl(a, j));
  }
}

FEFunction FEFunction::zero(const TaylorHoodSpace& space, FieldKind kind) {
  FEFunction f;
  f.space = &space;
  f.kind = kind;
  f.coeffs = Eigen::VectorXd::Zero(kind == FieldKind::Velocity ? space.num_velocity_dofs()
                                                               : space.num_pressure_dofs());
  return f;
}

VelocityAtPoint evaluate_velocity(const FEFunction& u, int k, const double* values,
                                  const Eigen::Matrix<double, 10, 3>& gradients) {
  const TaylorHoodSpace& s = *u.space;
  const int d = s.dim();
  VelocityAtPoint out{Vec::Zero(d), Mat::Zero(d, d)};
  for (int i = 0; i < s.p2_per_element(); ++i) {
    const int node = s.p2_node(k, i);
    for (int c = 0; c < d; ++c) {
      const double coef = u.coeffs[s.velocity_dof(c, node)];
      out.value[c] += coef * values[i];
      for (int j = 0; j < d; ++j) out.gradient(c, j) += coef * gradients(i, j);
    }
  }
  return out;
}

Vec velocity_value(const FEFunction& u, int k, const std::array<double, 4>& bary) {
  require_kind(u, FieldKind::Velocity, "velocity_value");
  double values[10];
  Eigen::Matrix<double, 10, 3> grads;
  u.space->p2_basis(k, bary, values, grads);
  return evaluate_velocity(u, k, values, grads).value;
}

Mat velocity_gradient(const FEFunction& u, int k, const std::array<double, 4>& bary) {
  require_kind(u, FieldKind::Velocity, "velocity_gradient");
  double values[10];
  Eigen::Matrix<double, 10, 3> grads;
  u.space->p2_basis(k, bary, values, grads);
  return evaluate_velocity(u, k, values, grads).gradient;
}

double pressure_value(const FEFunction& q, int k, const std::array<double, 4>& bary) {
  require_kind(q, FieldKind::Pressure, "pressure_value");
  const TaylorHoodSpace& s = *q.space;
  double v = 0.0;
  for (int a = 0; a <= s.dim(); ++a) v += bary[a] * q.coeffs[s.mesh().simplex_vertex(k, a)];
  return v;
}

FEFunction interpolate_velocity(const TaylorHoodSpace& space, const VectorField& w) {
  FEFunction u = FEFunction::zero(space, FieldKind::Velocity);
  const auto& pts = space.p2_node_points();
  for (int z = 0; z < space.num_p2_nodes(); ++z) {
    const Vec value = w(pts[z]).value;
    for (int c = 0; c < space.dim(); ++c) u.coeffs[space.velocity_dof(c, z)] = value[c];
  }
  return u;
}

FEFunction interpolate_pressure(const TaylorHoodSpace& space, const ScalarField& q) {
  FEFunction f = FEFunction::zero(space, FieldKind::Pressure);
  for (int v = 0; v < space.num_p1_nodes(); ++v) f.coeffs[v] = q(space.mesh().vertex(v));
  return f;
}

Vec velocity_mean_integral(const FEFunction& u) {
  require_kind(u, FieldKind::Velocity, "velocity_mean_integral");
  const TaylorHoodSpace& s = *u.space;
  Vec total = Vec::Zero(s.dim());
  const auto& rule = s.rule();
  for (int k = 0; k < s.num_elements(); ++k) {
    const double scale = s.weight_scale(k);
    for (int q = 0; q < rule.size(); ++q) {
      total += rule.weights[q] * scale * velocity_value(u, k, rule.barycentric[q]);
    }
  }
  return total;
}

double pressure_integral(const FEFunction& q) {
  require_kind(q, FieldKind::Pressure, "pressure_integral");
  const TaylorHoodSpace& s = *q.space;
  double total = 0.0;
  for (int k = 0; k < s.num_elements(); ++k) {
    double sum = 0.0;
    for (int a = 0; a <= s.dim(); ++a) sum += q.coeffs[s.mesh().simplex_vertex(k, a)];
    total += s.geometry(k).volume * sum / (s.dim() + 1);
  }
  return total;
}

double l2_norm(const FEFunction& u) {
  const TaylorHoodSpace& s = *u.space;
  const auto& rule = s.rule();
  double total = 0.0;
  for (int k = 0; k < s.num_elements(); ++k) {
    const double scale = s.weight_scale(k);
    for (int q = 0; q < rule.size(); ++q) {
      const double w = rule.weights[q] * scale;
      if (u.kind == FieldKind::Velocity) {
        total += w * velocity_value(u, k, rule.barycentric[q]).squaredNorm();
      } else {
        const double v = pressure_value(u, k, rule.barycentric[q]);
        total += w * v * v;
      }
    }
  }
  return std::sqrt(total);
}

VelocityErrorNorms velocity_error(const FEFunction& uh, const VectorField& w, double r) {
  require_kind(uh, FieldKind::Velocity, "velocity_error");
  const TaylorHoodSpace& s = *uh.space;
  double values[10];
  Eigen::Matrix<double, 10, 3> grads;
  double l2 = 0.0, gr = 0.0, dr = 0.0;
  for_each_quadrature_point(s, [&](int k, int q, const Vec& x, double weight) {
    s.p2_basis(k, s.rule().barycentric[q], values, grads);
    const VelocityAtPoint h = evaluate_velocity(uh, k, values, grads);
    const FieldSample e = w(x);
    const Mat diff = e.gradient - h.gradient;
    l2 += weight * (e.value - h.value).squaredNorm();
    gr += weight * std::pow(diff.norm(), r);
    dr += weight * std::pow(sym_part(diff).norm(), r);
  });
  return {std::sqrt(l2), std::pow(gr, 1.0 / r), std::pow(dr, 1.0 / r)};
}

VelocityErrorNorms field_norms(const TaylorHoodSpace& space, const VectorField& w, double r) {
  double l2 = 0.0, gr = 0.0, dr = 0.0;
  for_each_quadrature_point(space, [&](int, int, const Vec& x, double weight) {
    const FieldSample e = w(x);
    l2 += weight * e.value.squaredNorm();
    gr += weight * std::pow(e.gradient.norm(), r);
    dr += weight * std::pow(sym_part(e.gradient).norm(), r);
  });
  return {std::sqrt(l2), std::pow(gr, 1.0 / r), std::pow(dr, 1.0 / r)};
}

double pressure_l2_error(const FEFunction& qh, const ScalarField& q) {
  require_kind(qh, FieldKind::Pressure, "pressure_l2_error");
  const TaylorHoodSpace& s = *qh.space;
  double total = 0.0;
  for_each_quadrature_point(s, [&](int k, int iq, const Vec& x, double weight) {
    const double diff = q(x) - pressure_value(qh, k, s.rule().barycentric[iq]);
    total += weight * diff * diff;
  });
  return std::sqrt(total);
}

}  // namespace pfluid
