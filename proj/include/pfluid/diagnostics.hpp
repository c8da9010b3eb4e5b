#pragma once

#include <vector>

#include "pfluid/constitutive.hpp"
#include "pfluid/gronwall.hpp"
#include "pfluid/manufactured.hpp"
#include "pfluid/solver.hpp"

namespace pfluid {

/// Constants attached to pipeline sequences. γ₁ is a quarter of the
/// coercivity constant of the stress; λ = δ and Λ = max(δ₀, 1).
struct DiagnosticConstants {
  double gamma2 = 10.0;
  double gamma3 = 10.0;
  double theta = 0.5;
  double delta0 = 1.0;
};

/// Sequences of the error recursion measured against the exact solution
/// (proxy for the time-discrete one), with R^m = Π^div u(t_m) - u(t_m):
///   a_m = ‖u(t_m) - u_h^m‖₂, b_m = ‖D(u(t_m) - u_h^m)‖_p,
///   r_m = ‖∇R^m‖_{3p/(p+1)},
///   s_m² = ‖F(Du) - F(DΠ^div u)‖₂² + Σ_K ∫_{S_K} |F(Du) - ⟨F(Du)⟩_{S_K}|²
///        + Σ_K ∫_K (φ_{|Du|})*(h|f| + h|d_t u| + h|u^{m-1}||∇u|) + ‖R^m‖₂²/k.
/// At m = 0, d_t u is u_t(0) and u^{-1} is u(0).
struct GronwallDiagnostics {
  GronwallData data;
  std::vector<double> f_distance;
  std::vector<double> oscillation;
  std::vector<double> conjugate;
  std::vector<double> remainder;
};

GronwallDiagnostics gronwall_diagnostics(const TaylorHoodSpace& space, const RunResult& run, double k,
                                         const ManufacturedSolution& sol, const PDeltaParams& params,
                                         const DiagnosticConstants& constants = {});

}  // namespace pfluid
