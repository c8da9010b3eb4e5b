#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "pfluid/gronwall.hpp"

using namespace pfluid;

namespace {

GronwallData zero_data(int steps = 4) {
  GronwallData d;
  d.k = 0.01;
  d.h = 0.1;
  d.gamma0 = 1.0;
  d.a.assign(steps + 1, 0.0);
  d.b.assign(steps + 1, 0.0);
  d.r.assign(steps + 1, 0.0);
  d.s.assign(steps + 1, 0.0);
  return d;
}

}  // namespace

TEST_CASE("zero sequences satisfy everything") {
  GronwallData d = zero_data();
  d.gamma0 = 0.3;
  CHECK(check_hypotheses(d).all());
  const RecursionFlags rec = check_recursions(d);
  CHECK(rec.all_bis());
  CHECK(rec.all_ter());
  CHECK(rec.first_failure() == 0);
  const GronwallVerdict v = verify_conclusion(d);
  CHECK(v.b_bound);
  CHECK(v.energy_bound);
  CHECK(v.energy_lhs == 0.0);
}

TEST_CASE("hypothesis violations") {
  GronwallData d = zero_data();
  d.gamma0 = 2.0;
  d.a[0] = std::sqrt(2.0 * d.gamma0) * d.h;
  HypothesisFlags f = check_hypotheses(d);
  CHECK_FALSE(f.a0);
  CHECK(f.b0);
  CHECK_FALSE(f.all());

  d = zero_data();
  d.gamma0 = 4.0;
  d.h = 1.0 / std::sqrt(d.gamma0);
  f = check_hypotheses(d);
  CHECK_FALSE(f.h_bound);
  CHECK(f.a0);
  d.h = 0.999 / std::sqrt(d.gamma0);
  CHECK(check_hypotheses(d).h_bound);
}

TEST_CASE("a jump in a breaks the first recursion at that step") {
  GronwallData d = zero_data(5);
  d.a[3] = 1.0;
  const RecursionFlags rec = check_recursions(d);
  REQUIRE(rec.bis.size() == 5);
  CHECK(rec.bis[0]);
  CHECK(rec.bis[1]);
  CHECK_FALSE(rec.bis[2]);
  CHECK(rec.bis[3]);
  CHECK(rec.first_failure() == 3);
}

TEST_CASE("constants re-substitute into their defining relations") {
  GronwallData d = zero_data(10);
  d.p = 2.0;
  d.lambda = 1.0;
  d.Lambda = 1.0;
  d.gamma1 = 0.7;
  d.gamma2 = 1.3;
  d.gamma3 = 2.0;
  d.theta = 0.5;
  d.gamma0 = 0.8;
  const GronwallConstants c = derive_constants(d);
  const double growth = std::exp(2.0 * c.gamma5 * d.k * d.steps());

  // p = 2 removes every (·)^{2-p} factor.
  CHECK(c.rho == doctest::Approx(1.0));
  CHECK(c.omega_min == doctest::Approx(d.gamma1));
  CHECK(d.gamma0 <= std::min(1.0, 1.0 / d.gamma1) * c.gamma4 * growth * (1.0 + 1e-14));
  CHECK(c.k_bar == doctest::Approx(std::min(1.0, 0.5 / c.gamma5)));

  const double w = c.omega_min;
  const double alpha = d.gamma0 * (2.0 + w / 4.0 + 1.0 / w);
  const double bracket = 2.0 * d.gamma0 + d.gamma0 / d.gamma1 +
                         d.gamma2 * d.gamma2 / d.gamma1 * (d.gamma0 + 8.0 * alpha * growth / w);
  CHECK(c.alpha == doctest::Approx(alpha).epsilon(1e-14));
  CHECK(c.gamma0_bar == doctest::Approx(d.gamma1 / (2.0 * bracket)).epsilon(1e-13));
  CHECK(c.gamma0_bar * 2.0 * bracket == doctest::Approx(d.gamma1).epsilon(1e-13));
}

TEST_CASE("the coupling threshold shrinks as the convection constant grows") {
  GronwallData d = zero_data();
  d.p = 1.7;
  d.gamma2 = 1.0;
  const double low = derive_constants(d).gamma0_bar;
  d.gamma2 = 1.5;
  const double high = derive_constants(d).gamma0_bar;
  CHECK(high < low);
}

TEST_CASE("coupling violation makes the verdict not applicable") {
  GronwallData d = zero_data();
  const GronwallConstants c = derive_constants(d);
  d.h = std::sqrt(2.0 * c.gamma0_bar * d.k);
  const GronwallVerdict v = verify_conclusion(d);
  CHECK_FALSE(v.coupling_ok);
  CHECK(v.status == GronwallStatus::NotApplicable);
  CHECK(to_string(v.status) == "not applicable");
}

TEST_CASE("classical discrete Gronwall") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> beta(1 + trial % 30);
    for (double& b : beta) b = u(rng);
    const double alpha = u(rng);
    const double k = 0.05 * u(rng);
    const std::vector<double> bound = classical_gronwall_bound(alpha, k, beta);
    const std::vector<double> x = classical_gronwall_extremal(alpha, k, beta);
    // Direct recursion.
    std::vector<double> direct(beta.size() + 1);
    for (std::size_t m = 0; m < direct.size(); ++m) {
      double acc = 0.0;
      for (std::size_t j = 0; j < m; ++j) acc += k * beta[j] * direct[j];
      direct[m] = alpha + acc;
    }
    for (std::size_t m = 0; m < x.size(); ++m) {
      CHECK(std::abs(x[m] - direct[m]) <= 1e-10 * (1.0 + direct[m]));
      CHECK(x[m] <= bound[m] * (1.0 + 1e-10));
    }
  }
}

TEST_CASE("generated instances hold and injected violations are flagged") {
  std::mt19937_64 rng(2026);
  for (int trial = 0; trial < 100; ++trial) {
    const GronwallData d = generate_admissible(rng);
    const GronwallVerdict v = verify_conclusion(d);
    CHECK(v.applicable);
    CHECK(v.conclusion_ok());
    for (int i = 0; i < kGronwallViolationCount; ++i) {
      const auto kind = static_cast<GronwallViolation>(i);
      const GronwallData bad = inject_violation(d, kind, rng);
      CHECK_MESSAGE(violation_flagged(verify_conclusion(bad), kind), to_string(kind));
    }
  }
}

TEST_CASE("verification is bit-reproducible") {
  std::mt19937_64 rng(9);
  const GronwallData d = generate_admissible(rng);
  CHECK(verdict_json(d, verify_conclusion(d)) == verdict_json(d, verify_conclusion(d)));
}

TEST_CASE("bundle round trips and corrupted rows") {
  std::mt19937_64 rng(4);
  const GronwallData d = generate_admissible(rng);

  std::stringstream csv;
  write_gronwall_csv(csv, d);
  const GronwallData back = read_gronwall_csv(csv);
  CHECK(back.a == d.a);
  CHECK(back.b == d.b);
  CHECK(back.r == d.r);
  CHECK(back.s == d.s);
  CHECK(back.k == d.k);
  CHECK(back.gamma3 == d.gamma3);
  CHECK(back.proxy == d.proxy);

  const GronwallData from_json = gronwall_from_json(gronwall_json(d));
  CHECK(from_json.a == d.a);
  CHECK(from_json.theta == d.theta);

  std::string text = csv.str();
  const std::size_t row = text.find("\n1,");
  REQUIRE(row != std::string::npos);
  text.insert(row + 3, "x");
  std::istringstream bad(text);
  try {
    read_gronwall_csv(bad);
    FAIL("corrupted row accepted");
  } catch (const BundleError& e) {
    CHECK(std::string(e.what()).find("line") != std::string::npos);
  }
  CHECK_THROWS_AS(gronwall_from_json("{\"k\": 1"), BundleError);
}
