#include "pfluid/nfunction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>

namespace pfluid {
namespace {

void require_non_negative(double v, const char* name) {
  if (!(v >= 0.0) || std::isnan(v)) {
    std::ostringstream msg;
    msg << name << " must be >= 0 (got " << v << ")";
    throw std::invalid_argument(msg.str());
  }
}

// ∫_0^t (c + s)^{p-2} s ds in closed form. With r = t/c,
//   c^p [expm1(p log1p r)/p - expm1((p-1) log1p r)/(p-1)],
// and for small r the binomial series c^{p-2} t² Σ_k C(p-2,k) r^k/(k+2),
// which avoids the cancellation between the two terms.
double shifted_antiderivative(double p, double c, double t) {
  if (t == 0.0) return 0.0;
  if (c == 0.0) return std::pow(t, p) / p;
  const double r = t / c;
  if (r < 0.125) {
    double sum = 0.0;
    double binom = 1.0;
    double rk = 1.0;
    for (int k = 0; k < 80; ++k) {
      const double term = binom * rk / (k + 2.0);
      sum += term;
      if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
      binom *= (p - 2.0 - k) / (k + 1.0);
      rk *= r;
    }
    return std::pow(c, p - 2.0) * t * t * sum;
  }
  const double l = std::log1p(r);
  return std::pow(c, p) * (std::expm1(p * l) / p - std::expm1((p - 1.0) * l) / (p - 1.0));
}

}  // namespace

double phi_prime(const PDeltaParams& params, double t) {
  require_non_negative(t, "t");
  if (t == 0.0) return 0.0;
  return std::pow(params.delta + t, params.p - 2.0) * t;
}

double phi_second(const PDeltaParams& params, double t) {
  require_non_negative(t, "t");
  if (t == 0.0) {
    if (params.delta > 0.0) return std::pow(params.delta, params.p - 2.0);
    return params.p == 2.0 ? 1.0 : (params.p < 2.0 ? std::numeric_limits<double>::infinity() : 0.0);
  }
  const double base = params.delta + t;
  return std::pow(base, params.p - 3.0) * (params.delta + (params.p - 1.0) * t);
}

double phi(const PDeltaParams& params, double t) {
  require_non_negative(t, "t");
  return shifted_antiderivative(params.p, params.delta, t);
}

double phi_shifted_prime(const PDeltaParams& params, double a, double t) {
  require_non_negative(a, "a");
  require_non_negative(t, "t");
  if (t == 0.0) return 0.0;
  return phi_prime(params, a + t) * t / (a + t);
}

double phi_shifted(const PDeltaParams& params, double a, double t) {
  require_non_negative(a, "a");
  require_non_negative(t, "t");
  if (t == 0.0) return 0.0;
  return shifted_antiderivative(params.p, params.delta + a, t);
}

double phi_shifted_conjugate(const PDeltaParams& params, double a, double t) {
  require_non_negative(a, "a");
  require_non_negative(t, "t");
  if (t == 0.0) return 0.0;
  if (params.delta == 0.0 && a == 0.0) {
    const double q = params.conjugate_exponent();
    return std::pow(t, q) / q;
  }

  auto g = [&](double s) { return phi_shifted_prime(params, a, s) - t; };
  double lower = 0.0;
  double upper = std::max(t, 1.0);
  int expansions = 0;
  while (g(upper) < 0.0) {
    lower = upper;
    upper *= 2.0;
    if (++expansions > 4000 || !std::isfinite(upper)) {
      throw RootFindError("phi_shifted_conjugate: failed to bracket root", lower, upper);
    }
  }

  std::uintmax_t max_iter = 300;
  boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 3);
  const double g_lower = g(lower);
  const double g_upper = g(upper);
  double s = upper;
  if (g_upper != 0.0) {
    auto bracket = boost::math::tools::toms748_solve(g, lower, upper, g_lower, g_upper, tol,
                                                     max_iter);
    if (max_iter >= 300) {
      throw RootFindError("phi_shifted_conjugate: root iteration did not converge",
                          bracket.first, bracket.second);
    }
    s = 0.5 * (bracket.first + bracket.second);
  }
  return std::max(0.0, s * t - phi_shifted(params, a, s));
}

double phi_conjugate(const PDeltaParams& params, double t) {
  return phi_shifted_conjugate(params, 0.0, t);
}

double young_constant(const PDeltaParams& params, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  const double q = params.conjugate_exponent();
  return 2.0 * std::max(std::pow(epsilon, 1.0 - q), 1.0 / epsilon);
}

YoungSplit young_split(const PDeltaParams& params, double a, double t, double s,
                       double epsilon) {
  const double c = young_constant(params, epsilon);
  return {t * s, epsilon * phi_shifted(params, a, t) + c * phi_shifted_conjugate(params, a, s)};
}

double quasi_norm_constant(const PDeltaParams& params, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  const double k2 = kEquivalenceEnvelope * kEquivalenceEnvelope;
  const double upper_index_minus_one = std::max(1.0, params.p - 1.0);
  const double eps1 = epsilon / (params.mu * k2 * upper_index_minus_one);
  const double young = std::max(1.0 / eps1, std::pow(eps1, 1.0 - params.p));
  return params.mu * k2 * young;
}

}  // namespace pfluid
