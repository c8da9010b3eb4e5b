#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "pfluid/constitutive.hpp"
#include "pfluid/manufactured.hpp"
#include "pfluid/solver.hpp"

namespace pfluid {

/// Errors against the exact solution at every time level m = 0..M:
///   a_m = ‖u(t_m) - u_h^m‖₂, b_m = ‖Du(t_m) - Du_h^m‖_p,
///   nd_m = ‖F(Du(t_m)) - F(Du_h^m)‖₂².
struct ErrorSeries {
  double k = 0.0;
  std::vector<double> t;
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> nd;

  double max_a2() const;
  /// k Σ_{m=0}^{M} nd_m.
  double k_sum_nd() const;
  /// sqrt(max_a2 + k_sum_nd).
  double total() const;
};

ErrorSeries measure_errors(const RunResult& run, double k, const ManufacturedSolution& sol,
                           const PDeltaParams& params);

/// k = max{h^{(3p-2)/2}, h²} / c3. Throws std::invalid_argument unless
/// p ∈ (3/2, 2], h > 0, c3 > 0.
double coupling_schedule(double p, double h, double c3);

/// Number of steps M = max(1, ⌊T / k_min⌋), so that k = T/M >= k_min
/// whenever T >= k_min.
int step_count(double T, double k_min);

struct ConvergenceRow {
  int n = 0;
  double h = 0.0;
  double k = 0.0;
  int steps = 0;
  /// False when T < k_min forced a single step with k < k_min.
  bool coupling_satisfied = true;
  double p = 2.0;
  double delta = 0.0;
  double max_a2 = 0.0;
  double k_sum_nd = 0.0;
  double total = 0.0;
  std::optional<double> eoc_total;
  std::optional<double> eoc_a;   // of sqrt(max_a2)
  std::optional<double> eoc_nd;  // of sqrt(k_sum_nd)
};

/// Rows ordered by decreasing h.
struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;

  /// Fills the rates of rows 1.. from consecutive pairs; pairs with a zero
  /// error leave the rate empty.
  void compute_eoc();
  /// Every consecutive total strictly decreases.
  bool monotone() const;
};

/// h,k,p,delta,max_a2,k_sum_nd,total,eoc_total,eoc_a,eoc_nd under the
/// "# pfluid-lab v1" header.
void write_convergence_csv(std::ostream& out, const ConvergenceTable& table);

struct ConvergenceSetup {
  PDeltaParams params;
  int dim = 2;
  std::vector<int> subdivisions;
  double c3 = 1.0;
  double T = 0.5;
  std::string solution = "taylor-green-2d";
  NewtonOptions newton;
};

/// Everything available for one level while it is still in memory.
struct LevelContext {
  const ConvergenceSetup& setup;
  const TaylorHoodSpace& space;
  const ManufacturedSolution& solution;
  const RunResult& run;
  const ConvergenceRow& row;
  const ErrorSeries& errors;
};
using LevelObserver = std::function<void(const LevelContext&)>;

/// Runs each mesh with k from the coupling schedule, measures the errors and
/// tabulates the rates. Throws std::invalid_argument for fewer than two
/// meshes; StepFailure propagates.
ConvergenceTable run_convergence(const ConvergenceSetup& setup,
                                 const LevelObserver& observer = nullptr);

}  // namespace pfluid
