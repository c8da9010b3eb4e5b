#pragma once

#include <stdexcept>
#include <string>

#include "pfluid/constitutive.hpp"

namespace pfluid {

// The N-function generated by the stress law,
//   φ'(t) = (δ + t)^{p-2} t,   φ(t) = ∫_0^t φ'(s) ds,
// its shifted family φ_a and the complementary functions. φ and φ_a are
// evaluated from the exact antiderivative of (c + s)^{p-2} s, c = δ + a.

class RootFindError : public std::runtime_error {
 public:
  RootFindError(const std::string& what, double lower, double upper)
      : std::runtime_error(what), lower_(lower), upper_(upper) {}
  double lower() const { return lower_; }
  double upper() const { return upper_; }

 private:
  double lower_;
  double upper_;
};

double phi_prime(const PDeltaParams& params, double t);
double phi_second(const PDeltaParams& params, double t);
double phi(const PDeltaParams& params, double t);

double phi_shifted_prime(const PDeltaParams& params, double a, double t);
double phi_shifted(const PDeltaParams& params, double a, double t);

/// φ*(t) = sup_{s>=0} (st - φ(s)).
double phi_conjugate(const PDeltaParams& params, double t);
/// (φ_a)*(t). Solves φ'_a(s) = t by bracketing and returns st - φ_a(s).
double phi_shifted_conjugate(const PDeltaParams& params, double a, double t);

/// c_ε in ts <= ε φ_a(t) + c_ε (φ_a)*(s), uniform in a >= 0.
///
/// The sharp bound for the canonical φ is max(ε^{1-p'}, ε^{-1}): the
/// complementary function has Simonenko indices between min(2, p') and
/// max(2, p'). The returned value doubles it.
double young_constant(const PDeltaParams& params, double epsilon);

struct YoungSplit {
  double lhs;
  double rhs;
};

YoungSplit young_split(const PDeltaParams& params, double a, double t, double s,
                       double epsilon);

/// Envelope constant K assumed for the pointwise equivalences
/// |S(P)-S(Q)| <= μ K φ'_{|P|}(|P-Q|) and φ_{|P|}(|P-Q|) <= K |F(P)-F(Q)|².
inline constexpr double kEquivalenceEnvelope = 64.0;

/// c_ε such that (S(U)-S(V))·(W-V) <= ε |F(U)-F(V)|² + c_ε |F(W)-F(V)|²,
/// chained from the envelope constant and Young's inequality for φ_{|V|}.
double quasi_norm_constant(const PDeltaParams& params, double epsilon);

}  // namespace pfluid
