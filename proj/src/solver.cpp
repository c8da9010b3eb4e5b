#include "pfluid/solver.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "pfluid/projection.hpp"

namespace pfluid {
namespace {

using Grad10 = Eigen::Matrix<double, 10, 3>;
using Clock = std::chrono::steady_clock;

// Local data of one quadrature point.
struct PointData {
  double phi[10];
  Grad10 grad;
  std::array<double, 4> bary;
  double weight;
};

template <class Fn>
void for_each_point(const TaylorHoodSpace& s, Fn&& fn) {
  const QuadratureRule& rule = s.rule();
  PointData pd;
  for (int k = 0; k < s.num_elements(); ++k) {
    const double scale = s.weight_scale(k);
    for (int q = 0; q < rule.size(); ++q) {
      s.p2_basis(k, rule.barycentric[q], pd.phi, pd.grad);
      pd.bary = rule.barycentric[q];
      pd.weight = rule.weights[q] * scale;
      fn(k, pd);
    }
  }
}

FEFunction velocity_from(const TaylorHoodSpace& s, const Eigen::VectorXd& x) {
  FEFunction u = FEFunction::zero(s, FieldKind::Velocity);
  u.coeffs = x.head(s.num_velocity_dofs());
  return u;
}

double pressure_at(const TaylorHoodSpace& s, const Eigen::VectorXd& x, int offset, int k,
                   const std::array<double, 4>& bary) {
  double v = 0.0;
  for (int a = 0; a <= s.dim(); ++a) v += bary[a] * x[offset + s.mesh().simplex_vertex(k, a)];
  return v;
}

}  // namespace

void RunConfig::validate() const {
  params.validate();
  if (space == nullptr) throw std::invalid_argument("RunConfig.space: missing");
  if (!(k > 0.0) || !std::isfinite(k)) throw std::invalid_argument("RunConfig.k: must be > 0");
  if (steps < 1) throw std::invalid_argument("RunConfig.steps: must be >= 1");
  if (!forcing) throw std::invalid_argument("RunConfig.forcing: missing");
  if (!initial_velocity) throw std::invalid_argument("RunConfig.initial_velocity: missing");
}

bool EnergyTerms::holds() const {
  const double scale = 1.0 + std::abs(velocity_sq) + std::abs(previous_sq) + std::abs(dissipation) +
                       std::abs(forcing_work);
  return lhs() <= rhs() + 1e-8 * scale;
}

double trilinear_b(const FEFunction& u, const FEFunction& v, const FEFunction& w) {
  const TaylorHoodSpace& s = *u.space;
  double total = 0.0;
  for_each_point(s, [&](int k, const PointData& pd) {
    const VelocityAtPoint uu = evaluate_velocity(u, k, pd.phi, pd.grad);
    const VelocityAtPoint vv = evaluate_velocity(v, k, pd.phi, pd.grad);
    const VelocityAtPoint ww = evaluate_velocity(w, k, pd.phi, pd.grad);
    total += pd.weight * 0.5 * ((vv.gradient * uu.value).dot(ww.value) - (ww.gradient * uu.value).dot(vv.value));
  });
  return total;
}

SchemeSystem::SchemeSystem(const RunConfig& config, const DiscreteState& prev)
    : config_(config), prev_(prev), t_(prev.t + config.k) {
  const TaylorHoodSpace& s = *config.space;
  const int d = s.dim();
  nu_ = s.num_velocity_dofs();
  np_ = s.num_pressure_dofs();
  size_ = nu_ + np_ + d + 1;
  velocity_integrals_ = velocity_basis_integrals(s);
  pressure_integrals_ = pressure_basis_integrals(s);

  // ⟨f(t_m), ξ⟩ is fixed during the step.
  load_ = Eigen::VectorXd::Zero(nu_);
  for_each_point(s, [&](int k, const PointData& pd) {
    const Vec f = config.forcing(t_, s.point(k, pd.bary));
    for (int i = 0; i < s.p2_per_element(); ++i) {
      const int node = s.p2_node(k, i);
      for (int c = 0; c < d; ++c) load_[s.velocity_dof(c, node)] += pd.weight * f[c] * pd.phi[i];
    }
  });
}

Eigen::VectorXd SchemeSystem::pack(const FEFunction& u, const FEFunction& pi) const {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(size_);
  x.head(nu_) = u.coeffs;
  x.segment(nu_, np_) = pi.coeffs;
  return x;
}

FEFunction SchemeSystem::velocity(const Eigen::VectorXd& x) const { return velocity_from(*config_.space, x); }

FEFunction SchemeSystem::pressure(const Eigen::VectorXd& x) const {
  FEFunction q = FEFunction::zero(*config_.space, FieldKind::Pressure);
  q.coeffs = x.segment(nu_, np_);
  return q;
}

Eigen::VectorXd SchemeSystem::residual(const Eigen::VectorXd& x) const {
  const TaylorHoodSpace& s = *config_.space;
  const int d = s.dim();
  const int nl = s.p2_per_element();
  const double inv_k = 1.0 / config_.k;
  const FEFunction u = velocity_from(s, x);
  Eigen::VectorXd r = Eigen::VectorXd::Zero(size_);

  for_each_point(s, [&](int k, const PointData& pd) {
    const VelocityAtPoint cur = evaluate_velocity(u, k, pd.phi, pd.grad);
    const VelocityAtPoint old = evaluate_velocity(prev_.u, k, pd.phi, pd.grad);
    const double pi = pressure_at(s, x, nu_, k, pd.bary);
    const Mat stress_value = stress(config_.params, cur.gradient);
    const Vec rate = inv_k * (cur.value - old.value);
    const Vec transport = cur.gradient * old.value;  // [∇u^m] u^{m-1}
    const double w = pd.weight;

    for (int i = 0; i < nl; ++i) {
      const int node = s.p2_node(k, i);
      double adv = 0.0;  // ∇φ_i · u^{m-1}
      for (int j = 0; j < d; ++j) adv += pd.grad(i, j) * old.value[j];
      for (int c = 0; c < d; ++c) {
        double sd = 0.0;
        for (int j = 0; j < d; ++j) sd += stress_value(c, j) * pd.grad(i, j);
        r[s.velocity_dof(c, node)] +=
            w * (rate[c] * pd.phi[i] + sd + 0.5 * (transport[c] * pd.phi[i] - adv * cur.value[c]) -
                 pi * pd.grad(i, c));
      }
    }
    const double div = cur.gradient.trace();
    for (int a = 0; a <= d; ++a) r[nu_ + s.mesh().simplex_vertex(k, a)] -= w * div * pd.bary[a];
  });

  r.head(nu_) -= load_;
  for (int c = 0; c < d; ++c) {
    r.head(nu_) += x[nu_ + np_ + c] * velocity_integrals_.col(c);
    r[nu_ + np_ + c] = velocity_integrals_.col(c).dot(x.head(nu_));
  }
  r.segment(nu_, np_) += x[size_ - 1] * pressure_integrals_;
  r[size_ - 1] = pressure_integrals_.dot(x.segment(nu_, np_));
  return r;
}

void SchemeSystem::core_triplets(const Eigen::VectorXd& x, double floor,
                                 std::vector<Eigen::Triplet<double>>& t) const {
  const TaylorHoodSpace& s = *config_.space;
  const int d = s.dim();
  const int nl = s.p2_per_element();
  const double inv_k = 1.0 / config_.k;
  const FEFunction u = velocity_from(s, x);
  t.reserve(static_cast<std::size_t>(s.num_elements()) * (nl * d) * (nl * d + 2 * (d + 1)));

  // Element matrices are accumulated locally, then scattered once.
  const int nloc = nl * d;
  Eigen::MatrixXd auu(nloc, nloc), aup(nloc, d + 1);
  std::vector<int> udofs(nloc), pdofs(d + 1);
  int current = -1;
  auto flush = [&](int k) {
    if (k < 0) return;
    for (int a = 0; a < nloc; ++a) {
      for (int b = 0; b < nloc; ++b) t.emplace_back(udofs[a], udofs[b], auu(a, b));
      for (int b = 0; b <= d; ++b) {
        t.emplace_back(udofs[a], nu_ + pdofs[b], aup(a, b));
        t.emplace_back(nu_ + pdofs[b], udofs[a], aup(a, b));
      }
    }
  };

  Mat hc(d, d);
  for_each_point(s, [&](int k, const PointData& pd) {
    if (k != current) {
      flush(current);
      current = k;
      auu.setZero();
      aup.setZero();
      for (int i = 0; i < nl; ++i) {
        for (int c = 0; c < d; ++c) udofs[c * nl + i] = s.velocity_dof(c, s.p2_node(k, i));
      }
      for (int a = 0; a <= d; ++a) pdofs[a] = s.mesh().simplex_vertex(k, a);
    }
    const VelocityAtPoint cur = evaluate_velocity(u, k, pd.phi, pd.grad);
    const VelocityAtPoint old = evaluate_velocity(prev_.u, k, pd.phi, pd.grad);
    const Stress4Tensor ds = stress_jacobian(config_.params, cur.gradient, floor);
    const double w = pd.weight;

    double adv[10];
    for (int i = 0; i < nl; ++i) {
      adv[i] = 0.0;
      for (int j = 0; j < d; ++j) adv[i] += pd.grad(i, j) * old.value[j];
    }
    for (int jb = 0; jb < nl; ++jb) {
      for (int cb = 0; cb < d; ++cb) {
        // ∂S : ∇ζ with ζ = φ_jb e_cb.
        hc.setZero();
        for (int l = 0; l < d; ++l) hc(cb, l) = pd.grad(jb, l);
        const Mat dsz = ds.apply(hc);
        const int col = cb * nl + jb;
        for (int ia = 0; ia < nl; ++ia) {
          for (int ca = 0; ca < d; ++ca) {
            double v = 0.0;
            for (int j = 0; j < d; ++j) v += dsz(ca, j) * pd.grad(ia, j);
            if (ca == cb) {
              v += inv_k * pd.phi[ia] * pd.phi[jb];
              v += 0.5 * (adv[jb] * pd.phi[ia] - adv[ia] * pd.phi[jb]);
            }
            auu(ca * nl + ia, col) += w * v;
          }
        }
      }
    }
    for (int ia = 0; ia < nl; ++ia) {
      for (int ca = 0; ca < d; ++ca) {
        for (int b = 0; b <= d; ++b) aup(ca * nl + ia, b) -= w * pd.bary[b] * pd.grad(ia, ca);
      }
    }
  });
  flush(current);
}

SparseMatrix SchemeSystem::jacobian(const Eigen::VectorXd& x, double floor) const {
  std::vector<Eigen::Triplet<double>> t;
  core_triplets(x, floor, t);
  const int d = config_.space->dim();
  for (int c = 0; c < d; ++c) {
    for (int i = 0; i < nu_; ++i) {
      const double v = velocity_integrals_(i, c);
      if (v != 0.0) {
        t.emplace_back(i, nu_ + np_ + c, v);
        t.emplace_back(nu_ + np_ + c, i, v);
      }
    }
  }
  for (int a = 0; a < np_; ++a) {
    t.emplace_back(nu_ + a, size_ - 1, pressure_integrals_[a]);
    t.emplace_back(size_ - 1, nu_ + a, pressure_integrals_[a]);
  }
  SparseMatrix j(size_, size_);
  j.setFromTriplets(t.begin(), t.end());
  j.makeCompressed();
  return j;
}

void SchemeSystem::factorize(const Eigen::VectorXd& x, double floor) {
  std::vector<Eigen::Triplet<double>> t;
  core_triplets(x, floor, t);
  // The first pressure dof is pinned; its equation is implied by the others.
  const int pin = nu_;
  std::erase_if(t, [pin](const Eigen::Triplet<double>& e) { return e.row() == pin || e.col() == pin; });
  t.emplace_back(pin, pin, 1.0);
  SparseMatrix core(nu_ + np_, nu_ + np_);
  core.setFromTriplets(t.begin(), t.end());
  core.makeCompressed();
  lu_.factorize(core);

  const int d = config_.space->dim();
  Eigen::VectorXd col = Eigen::VectorXd::Zero(nu_ + np_);
  border_.resize(nu_ + np_, d);
  for (int c = 0; c < d; ++c) {
    col.head(nu_) = velocity_integrals_.col(c);
    border_.col(c) = lu_.solve(col);
  }
  border_schur_ = (velocity_integrals_.transpose() * border_.topRows(nu_)).partialPivLu();
}

Eigen::VectorXd SchemeSystem::solve(const Eigen::VectorXd& rhs) const {
  const int d = config_.space->dim();
  const double volume = pressure_integrals_.sum();
  // Rows of the divergence block sum to zero, which fixes the pressure-mean multiplier.
  const double mu = rhs.segment(nu_, np_).sum() / volume;
  Eigen::VectorXd core_rhs = rhs.head(nu_ + np_);
  core_rhs.segment(nu_, np_) -= mu * pressure_integrals_;
  core_rhs[nu_] = 0.0;
  Eigen::VectorXd z = lu_.solve(core_rhs);
  const Eigen::VectorXd lambda =
      border_schur_.solve(velocity_integrals_.transpose() * z.head(nu_) - rhs.segment(nu_ + np_, d));
  z -= border_ * lambda;

  Eigen::VectorXd out(size_);
  out.head(nu_ + np_) = z;
  const double shift = (rhs[size_ - 1] - pressure_integrals_.dot(z.segment(nu_, np_))) / volume;
  out.segment(nu_, np_).array() += shift;
  out.segment(nu_ + np_, d) = lambda;
  out[size_ - 1] = mu;
  return out;
}

EnergyTerms SchemeSystem::energy(const Eigen::VectorXd& x) const {
  const TaylorHoodSpace& s = *config_.space;
  const FEFunction u = velocity_from(s, x);
  EnergyTerms e;
  for_each_point(s, [&](int k, const PointData& pd) {
    const VelocityAtPoint cur = evaluate_velocity(u, k, pd.phi, pd.grad);
    const VelocityAtPoint old = evaluate_velocity(prev_.u, k, pd.phi, pd.grad);
    const Mat du = sym_part(cur.gradient);
    e.velocity_sq += pd.weight * cur.value.squaredNorm();
    e.previous_sq += pd.weight * old.value.squaredNorm();
    e.increment_sq += pd.weight * (cur.value - old.value).squaredNorm();
    e.dissipation += pd.weight * dot(stress(config_.params, du), du);
    e.p_energy += pd.weight * std::pow(du.norm(), config_.params.p);
  });
  e.dissipation *= 2.0 * config_.k;
  e.forcing_work = 2.0 * config_.k * load_.dot(x.head(nu_));
  return e;
}

Eigen::VectorXd assemble_residual(const RunConfig& config, const DiscreteState& prev,
                                  const FEFunction& u, const FEFunction& pi) {
  const SchemeSystem sys(config, prev);
  const TaylorHoodSpace& s = *config.space;
  const int d = s.dim();
  const int nu = s.num_velocity_dofs();
  const int np = s.num_pressure_dofs();
  Eigen::VectorXd x = sys.pack(u, pi);
  Eigen::VectorXd r = sys.residual(x);
  // Σ_i φ_i = 1 per component: removing the component sums tests with constants.
  const double volume = std::pow(kTwoPi, d);
  for (int c = 0; c < d; ++c) {
    double sum = 0.0;
    for (int z = 0; z < s.num_p2_nodes(); ++z) sum += r[s.velocity_dof(c, z)];
    x[nu + np + c] = -sum / volume;
  }
  return sys.residual(x);
}

std::pair<DiscreteState, StepReport> solve_timestep(const RunConfig& config, const DiscreteState& prev) {
  const auto start = Clock::now();
  const NewtonOptions& opt = config.newton;
  SchemeSystem sys(config, prev);

  StepReport report;
  report.m = prev.m + 1;
  double floor = opt.jacobian_floor;
  std::string last_failure;

  for (int attempt = 0; attempt <= opt.max_floor_raises; ++attempt, floor *= 10.0) {
    report.jacobian_floor = floor;
    report.floor_raises = attempt;
    Eigen::VectorXd x = sys.pack(prev.u, prev.pi);
    Eigen::VectorXd r = sys.residual(x);
    double norm = r.norm();
    report.initial_residual = norm;
    const double target = std::max(opt.relative_tolerance * norm, opt.absolute_tolerance);
    bool converged = norm <= target;
    int it = 0;
    try {
      while (!converged && it < opt.max_iterations) {
        sys.factorize(x, floor);
        ++report.linear_solves;
        const Eigen::VectorXd dx = sys.solve(-r);
        ++it;
        double alpha = 1.0;
        Eigen::VectorXd x_try = x + dx;
        Eigen::VectorXd r_try = sys.residual(x_try);
        int backtracks = 0;
        while (!(r_try.norm() < norm) && backtracks < opt.max_backtracks) {
          alpha *= 0.5;
          ++backtracks;
          x_try = x + alpha * dx;
          r_try = sys.residual(x_try);
        }
        report.backtracks += backtracks;
        if (!(r_try.norm() < norm)) {
          last_failure = "line search stalled at residual " + std::to_string(norm);
          break;
        }
        x = std::move(x_try);
        r = std::move(r_try);
        norm = r.norm();
        converged = norm <= target;
      }
    } catch (const SingularSystemError& e) {
      last_failure = e.what();
    }
    report.newton_iterations = it;
    report.residual = norm;
    if (converged) {
      DiscreteState next;
      next.m = prev.m + 1;
      next.t = prev.t + config.k;
      next.u = sys.velocity(x);
      next.pi = sys.pressure(x);
      report.seconds = std::chrono::duration<double>(Clock::now() - start).count();
      return {std::move(next), report};
    }
    if (last_failure.empty()) {
      last_failure = "no convergence after " + std::to_string(it) + " iterations (residual " +
                     std::to_string(norm) + ")";
    }
  }
  report.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  std::ostringstream msg;
  msg << "step " << report.m << " failed: " << last_failure << " (jacobian floor up to "
      << report.jacobian_floor << ")";
  throw StepFailure(msg.str(), report);
}

RunResult run(const RunConfig& config) {
  config.validate();
  const TaylorHoodSpace& s = *config.space;
  RunResult result;
  DiscreteState initial;
  initial.u = DivergenceProjector(s).apply(config.initial_velocity);
  initial.pi = FEFunction::zero(s, FieldKind::Pressure);
  result.states.push_back(std::move(initial));

  double max_sq = l2_norm(result.states.front().u);
  max_sq *= max_sq;
  double dissipation_sum = 0.0;
  for (int m = 1; m <= config.steps; ++m) {
    const DiscreteState& prev = result.states.back();
    auto [next, report] = solve_timestep(config, prev);
    const SchemeSystem sys(config, prev);
    const EnergyTerms e = sys.energy(sys.pack(next.u, next.pi));
    max_sq = std::max(max_sq, e.velocity_sq);
    dissipation_sum += config.k * e.p_energy;
    result.energy.push_back(e);
    result.steps.push_back(report);
    result.states.push_back(std::move(next));
  }
  result.energy_bound = max_sq + dissipation_sum;
  return result;
}

void write_step_csv(std::ostream& out, const RunResult& result) {
  out << "# pfluid-lab v1\n";
  out << "m,t,newton_iters,residual,backtracks,jacobian_floor,norm_u_sq,norm_u_prev_sq,dissipation,"
         "forcing_work,energy_lhs,energy_rhs,energy_ok\n";
  out.precision(12);
  for (std::size_t i = 0; i < result.steps.size(); ++i) {
    const StepReport& s = result.steps[i];
    const EnergyTerms& e = result.energy[i];
    out << s.m << ',' << result.states[i + 1].t << ',' << s.newton_iterations << ',' << s.residual
        << ',' << s.backtracks << ',' << s.jacobian_floor << ',' << e.velocity_sq << ','
        << e.previous_sq << ',' << e.dissipation << ',' << e.forcing_work << ',' << e.lhs() << ','
        << e.rhs() << ',' << (e.holds() ? 1 : 0) << '\n';
  }
}

}  // namespace pfluid
