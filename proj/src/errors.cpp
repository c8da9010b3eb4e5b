#include "pfluid/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pfluid/mesh.hpp"
#include "pfluid/rates.hpp"

namespace pfluid {

double ErrorSeries::max_a2() const {
  double out = 0.0;
  for (double v : a) out = std::max(out, v * v);
  return out;
}

double ErrorSeries::k_sum_nd() const {
  double sum = 0.0;
  for (double v : nd) sum += v;
  return k * sum;
}

double ErrorSeries::total() const { return std::sqrt(max_a2() + k_sum_nd()); }

ErrorSeries measure_errors(const RunResult& run, double k, const ManufacturedSolution& sol,
                           const PDeltaParams& params) {
  ErrorSeries out;
  out.k = k;
  if (run.states.empty()) return out;
  const TaylorHoodSpace& s = *run.states.front().u.space;
  const QuadratureRule& rule = s.rule();
  double values[10];
  Eigen::Matrix<double, 10, 3> grads;

  for (const DiscreteState& state : run.states) {
    double a2 = 0.0, bp = 0.0, nd = 0.0;
    for (int e = 0; e < s.num_elements(); ++e) {
      const double scale = s.weight_scale(e);
      for (int q = 0; q < rule.size(); ++q) {
        s.p2_basis(e, rule.barycentric[q], values, grads);
        const VelocityAtPoint h = evaluate_velocity(state.u, e, values, grads);
        const Vec x = s.point(e, rule.barycentric[q]);
        const Mat du = sym_part(sol.velocity_gradient(state.t, x));
        const Mat duh = sym_part(h.gradient);
        const double w = rule.weights[q] * scale;
        a2 += w * (sol.velocity(state.t, x) - h.value).squaredNorm();
        bp += w * std::pow((du - duh).norm(), params.p);
        nd += w * (f_map(params, du) - f_map(params, duh)).squaredNorm();
      }
    }
    out.t.push_back(state.t);
    out.a.push_back(std::sqrt(a2));
    out.b.push_back(std::pow(bp, 1.0 / params.p));
    out.nd.push_back(nd);
  }
  return out;
}

double coupling_schedule(double p, double h, double c3) {
  if (!(p > 1.5 && p <= 2.0)) throw std::invalid_argument("coupling_schedule: p must lie in (3/2, 2]");
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("coupling_schedule: h must be > 0");
  if (!(c3 > 0.0) || !std::isfinite(c3)) throw std::invalid_argument("coupling_schedule: c3 must be > 0");
  return std::max(std::pow(h, 0.5 * (3.0 * p - 2.0)), h * h) / c3;
}

int step_count(double T, double k_min) {
  if (!(T > 0.0) || !(k_min > 0.0)) throw std::invalid_argument("step_count: T and k_min must be > 0");
  // Guard exact quotients against rounding below the integer.
  const double ratio = T / k_min * (1.0 + 1e-12);
  return std::max(1, static_cast<int>(std::floor(ratio)));
}

void ConvergenceTable::compute_eoc() {
  auto rate = [](double e1, double e2, double h1, double h2) -> std::optional<double> {
    const double r = convergence_rate(e1, e2, h1, h2);
    if (std::isfinite(r)) return r;
    return std::nullopt;
  };
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ConvergenceRow& row = rows[i];
    if (i == 0) {
      row.eoc_total = row.eoc_a = row.eoc_nd = std::nullopt;
      continue;
    }
    const ConvergenceRow& prev = rows[i - 1];
    row.eoc_total = rate(prev.total, row.total, prev.h, row.h);
    row.eoc_a = rate(std::sqrt(prev.max_a2), std::sqrt(row.max_a2), prev.h, row.h);
    row.eoc_nd = rate(std::sqrt(prev.k_sum_nd), std::sqrt(row.k_sum_nd), prev.h, row.h);
  }
}

bool ConvergenceTable::monotone() const {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (!(rows[i].total < rows[i - 1].total)) return false;
  }
  return true;
}

void write_convergence_csv(std::ostream& out, const ConvergenceTable& table) {
  auto opt = [&out](const std::optional<double>& v) {
    if (v) out << *v;
  };
  out << "# pfluid-lab v1\n";
  out << "h,k,p,delta,max_a2,k_sum_nd,total,eoc_total,eoc_a,eoc_nd\n";
  out.precision(12);
  for (const ConvergenceRow& r : table.rows) {
    out << r.h << ',' << r.k << ',' << r.p << ',' << r.delta << ',' << r.max_a2 << ',' << r.k_sum_nd
        << ',' << r.total << ',';
    opt(r.eoc_total);
    out << ',';
    opt(r.eoc_a);
    out << ',';
    opt(r.eoc_nd);
    out << '\n';
  }
}

ConvergenceTable run_convergence(const ConvergenceSetup& setup, const LevelObserver& observer) {
  if (setup.subdivisions.size() < 2) {
    throw std::invalid_argument("convergence: at least two mesh sizes are needed for rates");
  }
  setup.params.validate();
  if (!(setup.T > 0.0)) throw std::invalid_argument("convergence: T must be > 0");
  const auto sol = make_solution(setup.solution, setup.dim);
  if (sol->dim() != setup.dim) throw std::invalid_argument("convergence: solution dimension mismatch");
  const ForcingField forcing = forcing_from_solution(setup.params, *sol);

  ConvergenceTable table;
  for (int n : setup.subdivisions) {
    const PeriodicMesh mesh = build_structured(setup.dim, n);
    const TaylorHoodSpace space(mesh);
    ConvergenceRow row;
    row.n = n;
    row.h = quality_report(mesh).h;
    const double k_min = coupling_schedule(setup.params.p, row.h, setup.c3);
    row.steps = step_count(setup.T, k_min);
    row.k = setup.T / row.steps;
    row.coupling_satisfied = row.k >= k_min * (1.0 - 1e-12);
    row.p = setup.params.p;
    row.delta = setup.params.delta;

    RunConfig config;
    config.params = setup.params;
    config.space = &space;
    config.k = row.k;
    config.steps = row.steps;
    config.forcing = forcing;
    config.initial_velocity = sol->velocity_field(0.0);
    config.newton = setup.newton;
    const RunResult result = run(config);
    const ErrorSeries errors = measure_errors(result, row.k, *sol, setup.params);
    row.max_a2 = errors.max_a2();
    row.k_sum_nd = errors.k_sum_nd();
    row.total = errors.total();
    table.rows.push_back(row);
    if (observer) observer(LevelContext{setup, space, *sol, result, table.rows.back(), errors});
  }
  std::sort(table.rows.begin(), table.rows.end(),
            [](const ConvergenceRow& x, const ConvergenceRow& y) { return x.h > y.h; });
  table.compute_eoc();
  return table;
}

}  // namespace pfluid
