#include "pfluid/properties.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "pfluid/constitutive.hpp"
#include "pfluid/nfunction.hpp"

namespace pfluid {
namespace {

using Clock = std::chrono::steady_clock;

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
  double log_uniform(double lo_exp, double hi_exp) { return std::pow(10.0, uniform(lo_exp, hi_exp)); }
  int dim() { return uniform(0.0, 1.0) < 0.5 ? 2 : 3; }

  PDeltaParams params() {
    PDeltaParams pr;
    pr.p = uniform(1.5, 2.0);
    // A share of exactly degenerate samples.
    pr.delta = uniform(0.0, 1.0) < 0.25 ? 0.0 : uniform(0.0, 1.0);
    pr.mu = 1.0;
    return pr;
  }

  Mat matrix(int dim, bool stressed) {
    Mat a(dim, dim);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) a(i, j) = uniform(-1.0, 1.0);
    }
    if (stressed) a *= log_uniform(-8.0, 8.0);
    return a;
  }

 private:
  std::mt19937_64 rng_;
};

class RatioTracker {
 public:
  explicit RatioTracker(std::string name) { result_.name = std::move(name); }

  void add(double ratio) {
    ++result_.samples;
    if (result_.samples == 1) {
      result_.worst_low = result_.worst_high = ratio;
    } else {
      result_.worst_low = std::min(result_.worst_low, ratio);
      result_.worst_high = std::max(result_.worst_high, ratio);
    }
    if (!(ratio >= 1.0 / kRatioEnvelope && ratio <= kRatioEnvelope)) ++result_.failures;
  }

  // Records a margin that must be >= 0.
  void add_margin(double margin) {
    ++result_.samples;
    if (result_.samples == 1) {
      result_.worst_low = result_.worst_high = margin;
    } else {
      result_.worst_low = std::min(result_.worst_low, margin);
      result_.worst_high = std::max(result_.worst_high, margin);
    }
    if (!(margin >= 0.0)) ++result_.failures;
  }

  PropertyResult finish(Clock::time_point start, std::string detail) {
    result_.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    result_.detail = std::move(detail);
    return result_;
  }

 private:
  PropertyResult result_;
};

}  // namespace

bool PropertyReport::passed() const {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed(); });
}

PropertyReport constitutive_properties(std::uint64_t seed, int count) {
  if (count < 1) throw std::invalid_argument("count must be >= 1");
  const auto start = Clock::now();
  Sampler rng(seed);

  RatioTracker stress_f("chain: stress_dot / f_squared");
  RatioTracker stress_shifted("chain: stress_dot / shifted");
  RatioTracker stress_second("chain: stress_dot / second_order");
  RatioTracker f_shifted("chain: f_squared / shifted");
  RatioTracker f_second("chain: f_squared / second_order");
  RatioTracker shifted_second("chain: shifted / second_order");
  RatioTracker difference("stress difference / shifted derivative");
  RatioTracker self_product("S(Q)·Q / |F(Q)|^2");
  RatioTracker f_phi("|F(Q)|^2 / phi(|Q|)");
  RatioTracker monotone("monotonicity margin");
  RatioTracker young("young margin");
  RatioTracker quasi("quasi-norm margin");
  RatioTracker scaling("conjugate scaling margin");

  for (int i = 0; i < count; ++i) {
    const PDeltaParams pr = rng.params();
    const int dim = rng.dim();
    const bool stressed = (i % 2) == 1;
    const Mat p = rng.matrix(dim, stressed);
    const Mat q = rng.matrix(dim, stressed);
    const Mat ps = sym_part(p);
    const Mat qs = sym_part(q);

    const NaturalDistance nd = natural_distance_pointwise(pr, p, q);
    stress_f.add(equivalence_ratio(nd.stress_dot, nd.f_squared));
    stress_shifted.add(equivalence_ratio(nd.stress_dot, nd.shifted));
    stress_second.add(equivalence_ratio(nd.stress_dot, nd.second_order));
    f_shifted.add(equivalence_ratio(nd.f_squared, nd.shifted));
    f_second.add(equivalence_ratio(nd.f_squared, nd.second_order));
    shifted_second.add(equivalence_ratio(nd.shifted, nd.second_order));

    const Mat sp = stress(pr, p);
    const Mat sq = stress(pr, q);
    const double dist = (ps - qs).norm();
    difference.add(equivalence_ratio((sp - sq).norm(), phi_shifted_prime(pr, ps.norm(), dist)));
    self_product.add(equivalence_ratio(dot(sq, qs), f_map(pr, q).squaredNorm()));
    f_phi.add(equivalence_ratio(f_map(pr, q).squaredNorm(), phi(pr, qs.norm())));

    const double scale = (sp - sq).norm() * dist;
    monotone.add_margin(nd.stress_dot + 1e-14 * scale);

    // Young: ts <= ε φ_a(t) + c_ε (φ_a)*(s).
    {
      const double a = rng.log_uniform(-4.0, 4.0);
      const double t = rng.log_uniform(-4.0, 4.0);
      const double s = rng.log_uniform(-4.0, 4.0);
      const double eps = rng.log_uniform(-2.0, 1.0);
      const YoungSplit y = young_split(pr, a, t, s, eps);
      young.add_margin(y.rhs - y.lhs + 1e-12 * (1.0 + std::abs(y.rhs)));
    }

    // Quasi-norm inequality with U = P, V = Q and a third random W.
    for (double eps : {0.1, 1.0}) {
      const Mat w = rng.matrix(dim, stressed);
      const Mat fq = f_map(pr, q);
      const double lhs = dot(sp - sq, sym_part(w) - qs);
      const double rhs = eps * (f_map(pr, p) - fq).squaredNorm() +
                         quasi_norm_constant(pr, eps) * (f_map(pr, w) - fq).squaredNorm();
      quasi.add_margin(rhs - lhs + 1e-12 * (std::abs(lhs) + std::abs(rhs)));
    }

    // (φ_a)*(κt) <= 4 κ² (φ_a)*(t).
    {
      const double a = rng.log_uniform(-3.0, 3.0);
      const double t = rng.log_uniform(-3.0, 3.0);
      const double kappa = rng.uniform(0.0, 1.0);
      const double lhs = phi_shifted_conjugate(pr, a, kappa * t);
      const double rhs = 4.0 * kappa * kappa * phi_shifted_conjugate(pr, a, t);
      scaling.add_margin(rhs - lhs + 1e-12 * std::abs(rhs));
    }
  }

  PropertyReport report;
  std::ostringstream plan;
  plan << "seed=" << seed << " count=" << count;
  for (RatioTracker* t : {&stress_f, &stress_shifted, &stress_second, &f_shifted, &f_second,
                          &shifted_second, &difference, &self_product, &f_phi, &monotone, &young,
                          &quasi, &scaling}) {
    report.results.push_back(t->finish(start, plan.str()));
  }
  return report;
}

PropertyResult conjugate_identity(std::uint64_t seed, int count) {
  if (count < 1) throw std::invalid_argument("count must be >= 1");
  const auto start = Clock::now();
  Sampler rng(seed);
  RatioTracker tracker("conjugate identity relative defect");
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const PDeltaParams pr = rng.params();
    const double t = rng.log_uniform(-4.0, 4.0);
    const double d = phi_prime(pr, t);
    const double lhs = phi(pr, t) + phi_conjugate(pr, d);
    const double rhs = t * d;
    const double rel = std::abs(lhs - rhs) / std::abs(rhs);
    worst = std::max(worst, rel);
    tracker.add_margin(1e-10 - rel);
  }
  std::ostringstream detail;
  detail << "seed=" << seed << " count=" << count << " max_relative_defect=" << worst;
  return tracker.finish(start, detail.str());
}

PropertyResult jacobian_consistency(std::uint64_t seed, int count) {
  if (count < 1) throw std::invalid_argument("count must be >= 1");
  const auto start = Clock::now();
  Sampler rng(seed);
  RatioTracker tracker("jacobian finite-difference relative defect");
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const PDeltaParams pr = rng.params();
    const int dim = rng.dim();
    Mat a = rng.matrix(dim, false) * rng.log_uniform(0.0, 1.0);
    while (sym_part(a).norm() < 0.1) a = rng.matrix(dim, false) * rng.log_uniform(0.0, 1.0);
    const Stress4Tensor jac = stress_jacobian(pr, a);
    const double step = 1e-5 * std::max(1.0, a.norm());

    double err2 = 0.0, ref2 = 0.0;
    for (int k = 0; k < dim; ++k) {
      for (int l = 0; l < dim; ++l) {
        Mat e = Mat::Zero(dim, dim);
        e(k, l) = step;
        const Mat fd = (stress(pr, a + e) - stress(pr, a - e)) / (2.0 * step);
        for (int r = 0; r < dim; ++r) {
          for (int c = 0; c < dim; ++c) {
            const double diff = fd(r, c) - jac(r, c, k, l);
            err2 += diff * diff;
            ref2 += jac(r, c, k, l) * jac(r, c, k, l);
          }
        }
      }
    }
    const double rel = std::sqrt(err2 / ref2);
    worst = std::max(worst, rel);
    tracker.add_margin(1e-6 - rel);
  }
  std::ostringstream detail;
  detail << "seed=" << seed << " count=" << count << " max_relative_defect=" << worst;
  return tracker.finish(start, detail.str());
}

PropertyReport all_properties(std::uint64_t seed, int count) {
  PropertyReport report = constitutive_properties(seed, count);
  report.results.push_back(conjugate_identity(seed + 1, count));
  report.results.push_back(jacobian_consistency(seed + 2, count));
  return report;
}

}  // namespace pfluid
