#pragma once

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pfluid/constitutive.hpp"
#include "pfluid/linalg.hpp"
#include "pfluid/manufactured.hpp"
#include "pfluid/spaces.hpp"

namespace pfluid {

struct NewtonOptions {
  double relative_tolerance = 1e-10;
  double absolute_tolerance = 1e-12;
  int max_iterations = 50;
  int max_backtracks = 30;
  double jacobian_floor = kJacobianFloor;
  /// Retries of a failed step, each with a 10x larger Jacobian floor.
  int max_floor_raises = 6;
};

/// One run of the semi-implicit scheme: M steps of size k starting from the
/// divergence-preserving projection of the initial velocity.
struct RunConfig {
  PDeltaParams params;
  const TaylorHoodSpace* space = nullptr;
  double k = 0.0;
  int steps = 0;
  ForcingField forcing;
  VectorField initial_velocity;
  NewtonOptions newton;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct DiscreteState {
  int m = 0;
  double t = 0.0;
  FEFunction u;
  FEFunction pi;
};

struct StepReport {
  int m = 0;
  int newton_iterations = 0;
  double initial_residual = 0.0;
  double residual = 0.0;
  int backtracks = 0;
  double jacobian_floor = 0.0;
  int floor_raises = 0;
  int linear_solves = 0;
  double seconds = 0.0;
};

/// Terms of the per-step energy inequality
///   ‖u^m‖² + 2k⟨S(Du^m), Du^m⟩ <= ‖u^{m-1}‖² + 2k⟨f(t_m), u^m⟩.
struct EnergyTerms {
  double velocity_sq = 0.0;
  double previous_sq = 0.0;
  double dissipation = 0.0;   // 2k⟨S(Du^m), Du^m⟩
  double forcing_work = 0.0;  // 2k⟨f(t_m), u^m⟩
  double increment_sq = 0.0;  // ‖u^m - u^{m-1}‖²
  double p_energy = 0.0;      // ‖Du^m‖_p^p

  double lhs() const { return velocity_sq + dissipation; }
  double rhs() const { return previous_sq + forcing_work; }
  /// lhs <= rhs + 1e-8 * scale, scale = 1 + |each term|.
  bool holds() const;
};

class StepFailure : public std::runtime_error {
 public:
  StepFailure(const std::string& what, StepReport report)
      : std::runtime_error(what), report_(report) {}
  const StepReport& report() const { return report_; }
  int step() const { return report_.m; }

 private:
  StepReport report_;
};

struct RunResult {
  std::vector<DiscreteState> states;  // m = 0..M
  std::vector<StepReport> steps;      // m = 1..M
  std::vector<EnergyTerms> energy;    // m = 1..M
  /// max_m ‖u^m‖² + k Σ_{m>=1} ‖Du^m‖_p^p.
  double energy_bound = 0.0;
};

/// b(u, v, w) = ½[⟨[∇v]u, w⟩ - ⟨[∇w]u, v⟩].
double trilinear_b(const FEFunction& u, const FEFunction& v, const FEFunction& w);

/// Residual of the discrete system at time level m = prev.m + 1 for the
/// candidate (u, π). Layout: velocity rows, pressure rows, then the d
/// velocity-mean and the pressure-mean constraint rows. Momentum rows test
/// with all of X_h; the velocity-mean multiplier is chosen optimally, i.e.
/// the residual tested with constants is removed.
Eigen::VectorXd assemble_residual(const RunConfig& config, const DiscreteState& prev,
                                  const FEFunction& u, const FEFunction& pi);

/// Residual and Jacobian of the full unknown vector [u; π; λ_u; λ_p].
class SchemeSystem {
 public:
  SchemeSystem(const RunConfig& config, const DiscreteState& prev);

  int size() const { return size_; }
  Eigen::VectorXd residual(const Eigen::VectorXd& x) const;
  SparseMatrix jacobian(const Eigen::VectorXd& x, double floor) const;
  /// Factorizes the Jacobian at x for solve(). The dense mean constraints
  /// are handled by bordering around a sparse LU of the velocity-pressure block.
  void factorize(const Eigen::VectorXd& x, double floor);
  /// Solves J dx = rhs with the last factorization. Throws SingularSystemError.
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  EnergyTerms energy(const Eigen::VectorXd& x) const;

  Eigen::VectorXd pack(const FEFunction& u, const FEFunction& pi) const;
  FEFunction velocity(const Eigen::VectorXd& x) const;
  FEFunction pressure(const Eigen::VectorXd& x) const;

 private:
  const RunConfig& config_;
  const DiscreteState& prev_;
  double t_;
  int nu_, np_, size_;
  Eigen::VectorXd load_;
  Eigen::MatrixXd velocity_integrals_;
  Eigen::VectorXd pressure_integrals_;
  SparseDirectSolver lu_;
  Eigen::MatrixXd border_;
  Eigen::PartialPivLU<Eigen::MatrixXd> border_schur_;

  void core_triplets(const Eigen::VectorXd& x, double floor,
                     std::vector<Eigen::Triplet<double>>& t) const;
};

std::pair<DiscreteState, StepReport> solve_timestep(const RunConfig& config,
                                                    const DiscreteState& prev);

/// u^0 = Π^div u_0, then M steps. Throws StepFailure with the step index.
RunResult run(const RunConfig& config);

/// Per-step CSV: m, t, Newton statistics and energy terms.
void write_step_csv(std::ostream& out, const RunResult& result);

}  // namespace pfluid
