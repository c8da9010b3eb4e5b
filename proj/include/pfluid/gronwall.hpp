#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace pfluid {

/// Sequences and constants of the generalized discrete Gronwall lemma.
/// Sequences have length M + 1 (m = 0..M); s holds s_m, not s_m².
struct GronwallData {
  double k = 0.0;
  double h = 0.0;
  double p = 2.0;
  double lambda = 0.0;
  double Lambda = 1.0;
  double theta = 0.5;
  double gamma0 = 1.0;
  double gamma1 = 1.0;
  double gamma2 = 1.0;
  double gamma3 = 1.0;
  std::vector<double> a, b, r, s;
  /// Sequences built from the exact solution in place of the time-discrete one.
  bool proxy = false;

  int steps() const { return static_cast<int>(a.size()) - 1; }
  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Smallest γ₀ for which the four data bounds hold at this h.
double measured_gamma0(const GronwallData& data);

struct HypothesisFlags {
  bool a0 = false;      // a₀² <= γ₀h²
  bool b0 = false;      // b₀² <= γ₀h²
  bool r_sum = false;   // kΣ_{m=0}^{M} r_m² <= γ₀h²
  bool s_sum = false;   // kΣ_{m=0}^{M} s_m² <= γ₀h²
  bool h_bound = false; // 0 < h < 1/√γ₀
  bool all() const { return a0 && b0 && r_sum && s_sum && h_bound; }
};

HypothesisFlags check_hypotheses(const GronwallData& data);

/// Flags for m = 1..M (index m-1) of
///   bis: d_t a_m² + γ₁(λ+b_m)^{p-2} b_m² <= b_m r_m + γ₂ b_{m-1} b_m + s_m²
///   ter: d_t a_m² + γ₁(λ+b_m)^{p-2} b_m² <= b_m r_m + γ₃ b_m b_{m-1}^{1-θ} a_m^θ + s_m²
/// with slack 1e-12·(1 + magnitude of all terms).
struct RecursionFlags {
  std::vector<bool> bis;
  std::vector<bool> ter;
  bool all_bis() const;
  bool all_ter() const;
  /// First failing m, or 0.
  int first_failure() const;
};

RecursionFlags check_recursions(const GronwallData& data);

/// Constants of the conclusion, reconstructed with explicit Young splittings.
/// With L = max(Λ, 1) and ω₋ = γ₁(Λ + L)^{p-2}:
///   η = ω₋² / (4γ₃²(1-θ)),  γ₅ = (γ₃²/ω₋)·θ·η^{-(1-θ)/θ}  (γ₃²/ω₋ if θ = 1)
///   α = γ₀(2 + ω₋/4 + 1/ω₋),  ρ = ((Λ + L)/Λ)^{2-p}
///   γ₄ = max{2(1 + 4ρ)α, γ₀ / (min{1, (2Λ)^{2-p}/γ₁} e^{2γ₅kM})}
///   k̄ = min{1, 1/(2γ₅)}
///   B = 2γ₀ + γ₀/γ₁ + (γ₂²/γ₁)(γ₀ + 8α e^{2γ₅kM}/ω₋)
///   γ̄₀ = γ₁ / (2(1 + Λ)^{2(2-p)} B)
struct GronwallConstants {
  double omega_min = 0.0;
  double rho = 0.0;
  double eta = 0.0;
  double alpha = 0.0;
  double gamma4 = 0.0;
  double gamma5 = 0.0;
  double k_bar = 0.0;
  double bracket = 0.0;
  double gamma0_bar = 0.0;
};

GronwallConstants derive_constants(const GronwallData& data);

enum class GronwallStatus { Holds, Violated, NotApplicable };
std::string to_string(GronwallStatus status);

struct GronwallVerdict {
  HypothesisFlags hypotheses;
  RecursionFlags recursions;
  GronwallConstants constants;
  bool coupling_ok = false;  // h² < γ̄₀k
  bool step_ok = false;      // k < k̄
  bool applicable = false;
  /// max_{1<=m<=M} b_m <= 1 and
  /// max_{1<=m<=M} a_m² + γ₁(λ+Λ)^{p-2} kΣ_{m=1}^{M} b_m² <= γ₄h² e^{2γ₅kM}.
  bool b_bound = false;
  bool energy_bound = false;
  /// The same over m = 0..M with the doubled constant.
  bool b_bound_from_zero = false;
  bool energy_bound_from_zero = false;
  double energy_lhs = 0.0;
  double energy_rhs = 0.0;
  GronwallStatus status = GronwallStatus::NotApplicable;

  bool conclusion_ok() const { return status == GronwallStatus::Holds; }
};

GronwallVerdict verify_conclusion(const GronwallData& data, const GronwallConstants& constants);
GronwallVerdict verify_conclusion(const GronwallData& data);

/// x_m <= α + k Σ_{j<m} β_j x_j implies x_m <= α exp(k Σ_{j<m} β_j).
/// Returns the bound for m = 0..β.size().
std::vector<double> classical_gronwall_bound(double alpha, double k, const std::vector<double>& beta);
/// Extremal sequence x_m = α + k Σ_{j<m} β_j x_j.
std::vector<double> classical_gronwall_extremal(double alpha, double k, const std::vector<double>& beta);

/// Random instance satisfying the hypotheses, both recursions, k < k̄ and
/// h² < γ̄₀k, with a_m and b_m pushed towards their admissible maxima.
GronwallData generate_admissible(std::mt19937_64& rng);

enum class GronwallViolation { InitialA, InitialB, RSum, SSum, HBound, Recursion, Coupling, StepSize };
inline constexpr int kGronwallViolationCount = 8;
std::string to_string(GronwallViolation v);

/// Breaks exactly the named condition of an admissible instance.
GronwallData inject_violation(GronwallData data, GronwallViolation v, std::mt19937_64& rng);
/// Whether the verdict reports the named violation through its flags.
bool violation_flagged(const GronwallVerdict& verdict, GronwallViolation v);

class BundleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bundle IO. The CSV form is "# pfluid-lab v1", then "param,<name>,<value>"
/// lines, then "m,a,b,r,s" and one row per m. BundleError names the line.
void write_gronwall_csv(std::ostream& out, const GronwallData& data);
GronwallData read_gronwall_csv(std::istream& in);
std::string gronwall_json(const GronwallData& data);
GronwallData gronwall_from_json(const std::string& text);
/// Dispatches on the ".json" extension.
GronwallData read_gronwall_bundle(const std::string& path);
std::string verdict_json(const GronwallData& data, const GronwallVerdict& verdict);

}  // namespace pfluid
