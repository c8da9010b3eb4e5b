#include "pfluid/projection.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "pfluid/rates.hpp"

namespace pfluid {
namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;
using Grad10 = Eigen::Matrix<double, 10, 3>;

SparseMatrix from_triplets(Eigen::Index rows, Eigen::Index cols, const Triplets& t) {
  SparseMatrix m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

// Visits every quadrature point with the tabulated P2 basis.
template <class Fn>
void for_each_tabulated_point(const TaylorHoodSpace& s, Fn&& fn) {
  const QuadratureRule& rule = s.rule();
  double values[10];
  Grad10 grads;
  for (int k = 0; k < s.num_elements(); ++k) {
    const double scale = s.weight_scale(k);
    for (int q = 0; q < rule.size(); ++q) {
      s.p2_basis(k, rule.barycentric[q], values, grads);
      fn(k, rule.barycentric[q], values, grads, rule.weights[q] * scale);
    }
  }
}

}  // namespace

SparseMatrix velocity_mass_matrix(const TaylorHoodSpace& s) {
  Triplets t;
  const int d = s.dim();
  const int nl = s.p2_per_element();
  for_each_tabulated_point(s, [&](int k, const auto&, const double* v, const Grad10&, double w) {
    for (int i = 0; i < nl; ++i) {
      for (int j = 0; j < nl; ++j) {
        const double val = w * v[i] * v[j];
        for (int c = 0; c < d; ++c) {
          t.emplace_back(s.velocity_dof(c, s.p2_node(k, i)), s.velocity_dof(c, s.p2_node(k, j)), val);
        }
      }
    }
  });
  return from_triplets(s.num_velocity_dofs(), s.num_velocity_dofs(), t);
}

SparseMatrix velocity_stiffness_matrix(const TaylorHoodSpace& s) {
  Triplets t;
  const int d = s.dim();
  const int nl = s.p2_per_element();
  for_each_tabulated_point(s, [&](int k, const auto&, const double*, const Grad10& g, double w) {
    for (int i = 0; i < nl; ++i) {
      for (int j = 0; j < nl; ++j) {
        const double val = w * g.row(i).head(d).dot(g.row(j).head(d));
        for (int c = 0; c < d; ++c) {
          t.emplace_back(s.velocity_dof(c, s.p2_node(k, i)), s.velocity_dof(c, s.p2_node(k, j)), val);
        }
      }
    }
  });
  return from_triplets(s.num_velocity_dofs(), s.num_velocity_dofs(), t);
}

SparseMatrix pressure_mass_matrix(const TaylorHoodSpace& s) {
  Triplets t;
  const int nl = s.p1_per_element();
  for_each_tabulated_point(s, [&](int k, const auto& bary, const double*, const Grad10&, double w) {
    for (int a = 0; a < nl; ++a) {
      for (int b = 0; b < nl; ++b) {
        t.emplace_back(s.mesh().simplex_vertex(k, a), s.mesh().simplex_vertex(k, b),
                       w * bary[a] * bary[b]);
      }
    }
  });
  return from_triplets(s.num_pressure_dofs(), s.num_pressure_dofs(), t);
}

SparseMatrix divergence_matrix(const TaylorHoodSpace& s) {
  Triplets t;
  const int d = s.dim();
  const int nl = s.p2_per_element();
  for_each_tabulated_point(s, [&](int k, const auto& bary, const double*, const Grad10& g, double w) {
    for (int a = 0; a <= d; ++a) {
      const int row = s.mesh().simplex_vertex(k, a);
      for (int i = 0; i < nl; ++i) {
        for (int c = 0; c < d; ++c) {
          t.emplace_back(row, s.velocity_dof(c, s.p2_node(k, i)), w * bary[a] * g(i, c));
        }
      }
    }
  });
  return from_triplets(s.num_pressure_dofs(), s.num_velocity_dofs(), t);
}

Eigen::VectorXd pressure_basis_integrals(const TaylorHoodSpace& s) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(s.num_pressure_dofs());
  for (int k = 0; k < s.num_elements(); ++k) {
    for (int a = 0; a <= s.dim(); ++a) {
      out[s.mesh().simplex_vertex(k, a)] += s.geometry(k).volume / (s.dim() + 1);
    }
  }
  return out;
}

Eigen::MatrixXd velocity_basis_integrals(const TaylorHoodSpace& s) {
  const int d = s.dim();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(s.num_velocity_dofs(), d);
  for_each_tabulated_point(s, [&](int k, const auto&, const double* v, const Grad10&, double w) {
    for (int i = 0; i < s.p2_per_element(); ++i) {
      for (int c = 0; c < d; ++c) out(s.velocity_dof(c, s.p2_node(k, i)), c) += w * v[i];
    }
  });
  return out;
}

Eigen::VectorXd divergence_moments(const TaylorHoodSpace& s, const VectorField& w) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(s.num_pressure_dofs());
  for_each_quadrature_point(s, [&](int k, int q, const Vec& x, double weight) {
    const double div = w(x).gradient.trace();
    const auto& bary = s.rule().barycentric[q];
    for (int a = 0; a <= s.dim(); ++a) out[s.mesh().simplex_vertex(k, a)] += weight * div * bary[a];
  });
  return out;
}

Eigen::VectorXd divergence_moments(const FEFunction& w) {
  const TaylorHoodSpace& s = *w.space;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(s.num_pressure_dofs());
  for_each_tabulated_point(s, [&](int k, const auto& bary, const double* v, const Grad10& g,
                                  double weight) {
    const double div = evaluate_velocity(w, k, v, g).gradient.trace();
    for (int a = 0; a <= s.dim(); ++a) out[s.mesh().simplex_vertex(k, a)] += weight * div * bary[a];
  });
  return out;
}

DivergenceProjector::DivergenceProjector(const TaylorHoodSpace& space) : space_(&space) {
  const int nu = space.num_velocity_dofs();
  const int np = space.num_pressure_dofs();
  const SparseMatrix mass = velocity_mass_matrix(space);
  const SparseMatrix div = divergence_matrix(space);

  // [M Bᵀ; B 0] with the first pressure dof pinned. The moments of ψ_a sum to
  // ⟨div w, 1⟩ = 0, so the dropped row is implied by the others.
  Triplets t;
  t.reserve(mass.nonZeros() + 2 * div.nonZeros() + 1);
  for (int j = 0; j < mass.outerSize(); ++j) {
    for (SparseMatrix::InnerIterator it(mass, j); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
  }
  for (int j = 0; j < div.outerSize(); ++j) {
    for (SparseMatrix::InnerIterator it(div, j); it; ++it) {
      if (it.row() == 0) continue;
      t.emplace_back(nu + it.row(), it.col(), it.value());
      t.emplace_back(it.col(), nu + it.row(), it.value());
    }
  }
  t.emplace_back(nu, nu, 1.0);
  solver_.factorize(from_triplets(nu + np, nu + np, t));
}

FEFunction DivergenceProjector::solve(const Eigen::VectorXd& load,
                                      const Eigen::VectorXd& moments) const {
  const int nu = space_->num_velocity_dofs();
  const int np = space_->num_pressure_dofs();
  Eigen::VectorXd rhs(nu + np);
  rhs.head(nu) = load;
  rhs.segment(nu, np) = moments;
  rhs[nu] = 0.0;
  const Eigen::VectorXd x = solver_.solve(rhs);
  FEFunction out = FEFunction::zero(*space_, FieldKind::Velocity);
  out.coeffs = x.head(nu);
  return out;
}

FEFunction DivergenceProjector::apply(const VectorField& w) const {
  const TaylorHoodSpace& s = *space_;
  const int d = s.dim();
  Eigen::VectorXd load = Eigen::VectorXd::Zero(s.num_velocity_dofs());
  double values[10];
  Grad10 grads;
  for_each_quadrature_point(s, [&](int k, int q, const Vec& x, double weight) {
    const Vec wx = w(x).value;
    s.p2_basis(k, s.rule().barycentric[q], values, grads);
    for (int i = 0; i < s.p2_per_element(); ++i) {
      for (int c = 0; c < d; ++c) load[s.velocity_dof(c, s.p2_node(k, i))] += weight * values[i] * wx[c];
    }
  });
  return solve(load, divergence_moments(s, w));
}

FEFunction DivergenceProjector::apply(const FEFunction& w) const {
  const TaylorHoodSpace& s = *space_;
  const int d = s.dim();
  Eigen::VectorXd load = Eigen::VectorXd::Zero(s.num_velocity_dofs());
  for_each_tabulated_point(s, [&](int k, const auto&, const double* v, const Grad10& g, double weight) {
    const Vec wx = evaluate_velocity(w, k, v, g).value;
    for (int i = 0; i < s.p2_per_element(); ++i) {
      for (int c = 0; c < d; ++c) load[s.velocity_dof(c, s.p2_node(k, i))] += weight * v[i] * wx[c];
    }
  });
  return solve(load, divergence_moments(w));
}

FEFunction pi_div(const TaylorHoodSpace& space, const VectorField& w) {
  return DivergenceProjector(space).apply(w);
}

FEFunction pi_y(const TaylorHoodSpace& s, const ElementScalarField& q) {
  Eigen::VectorXd num = Eigen::VectorXd::Zero(s.num_pressure_dofs());
  Eigen::VectorXd den = Eigen::VectorXd::Zero(s.num_pressure_dofs());
  for_each_quadrature_point(s, [&](int k, int iq, const Vec& x, double weight) {
    const double qx = q(k, x);
    const auto& bary = s.rule().barycentric[iq];
    for (int a = 0; a <= s.dim(); ++a) {
      const int v = s.mesh().simplex_vertex(k, a);
      num[v] += weight * qx * bary[a];
      den[v] += weight * bary[a];
    }
  });
  FEFunction out = FEFunction::zero(s, FieldKind::Pressure);
  out.coeffs = num.cwiseQuotient(den);
  return out;
}

FEFunction pi_y(const TaylorHoodSpace& space, const ScalarField& q) {
  return pi_y(space, ElementScalarField([&q](int, const Vec& x) { return q(x); }));
}

double divergence_moment_defect(const VectorField& w, const FEFunction& vh) {
  const Eigen::VectorXd diff = divergence_moments(*vh.space, w) - divergence_moments(vh);
  return diff.cwiseAbs().maxCoeff();
}

ProjectionOrderReport check_projection_orders(int dim, const std::vector<int>& subdivisions,
                                              const VectorField& w, const ScalarField& q,
                                              double r) {
  ProjectionOrderReport report;
  for (int n : subdivisions) {
    const PeriodicMesh mesh = build_structured(dim, n);
    const TaylorHoodSpace space(mesh);
    const FEFunction pw = pi_div(space, w);
    const FEFunction py = pi_y(space, q);
    const VelocityErrorNorms err = velocity_error(pw, w, r);
    const VelocityErrorNorms exact = field_norms(space, w, r);
    const VelocityErrorNorms discrete =
        velocity_error(pw, [d = dim](const Vec&) { return FieldSample{Vec::Zero(d), Mat::Zero(d, d)}; }, r);

    ProjectionLevel level;
    level.n = n;
    level.h = quality_report(mesh).h;
    level.div_l2 = err.l2;
    level.div_grad_r = err.grad_r;
    level.div_stability = exact.grad_r > 0.0 ? discrete.grad_r / exact.grad_r : 0.0;
    level.y_l2 = pressure_l2_error(py, q);
    level.moment_defect = divergence_moment_defect(w, pw);
    report.max_stability = std::max(report.max_stability, level.div_stability);
    report.levels.push_back(level);
  }
  for (std::size_t i = 1; i < report.levels.size(); ++i) {
    const auto& a = report.levels[i - 1];
    const auto& b = report.levels[i];
    report.eoc_div_l2.push_back(convergence_rate(a.div_l2, b.div_l2, a.h, b.h));
    report.eoc_div_grad.push_back(convergence_rate(a.div_grad_r, b.div_grad_r, a.h, b.h));
    report.eoc_y_l2.push_back(convergence_rate(a.y_l2, b.y_l2, a.h, b.h));
  }
  return report;
}

double inf_sup_constant(const TaylorHoodSpace& space) {
  const SparseMatrix a = velocity_stiffness_matrix(space) + velocity_mass_matrix(space);
  const SparseMatrix b = divergence_matrix(space);
  const Eigen::MatrixXd q = Eigen::MatrixXd(pressure_mass_matrix(space));

  Eigen::SimplicialLDLT<SparseMatrix> chol(a);
  if (chol.info() != Eigen::Success) throw SingularSystemError("inf_sup_constant: H1 matrix");
  const Eigen::MatrixXd bt = Eigen::MatrixXd(SparseMatrix(b.transpose()));
  const Eigen::MatrixXd x = chol.solve(bt);
  const Eigen::MatrixXd schur = Eigen::MatrixXd(b) * x;

  // Smallest eigenvalue belongs to the constant pressure, which B annihilates.
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (schur + schur.transpose()), q);
  if (eig.info() != Eigen::Success) throw SingularSystemError("inf_sup_constant: eigensolver");
  return std::sqrt(std::max(0.0, eig.eigenvalues()[1]));
}

}  // namespace pfluid
