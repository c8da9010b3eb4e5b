#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pfluid {

/// Outcome of one sampled invariant. `worst_low`/`worst_high` are the extreme
/// observed ratios (or signed margins, see `detail`).
struct PropertyResult {
  std::string name;
  int samples = 0;
  int failures = 0;
  double worst_low = 0.0;
  double worst_high = 0.0;
  double seconds = 0.0;
  std::string detail;

  bool passed() const { return failures == 0; }
};

struct PropertyReport {
  std::vector<PropertyResult> results;
  bool passed() const;
};

/// Sampling plan: matrix entries uniform in [-1, 1]; every second sample is
/// rescaled by 10^U(-8, 8), P and Q independently; p ∈ [1.5, 2],
/// δ ∈ [0, 1], μ = 1, dim ∈ {2, 3}.
inline constexpr double kRatioEnvelope = 64.0;

/// Equivalence chain, stress-difference bound, F/φ bounds, monotonicity,
/// Young's inequality, the quasi-norm inequality and the conjugate scaling law.
PropertyReport constitutive_properties(std::uint64_t seed, int count);

/// φ(t) + φ*(φ'(t)) = t φ'(t), relative tolerance 1e-10.
PropertyResult conjugate_identity(std::uint64_t seed, int count);

/// stress_jacobian against central differences of stress, |A^sym| >= 0.1,
/// relative tolerance 1e-6.
PropertyResult jacobian_consistency(std::uint64_t seed, int count);

/// All of the above.
PropertyReport all_properties(std::uint64_t seed, int count);

}  // namespace pfluid
