#include "pfluid/gronwall.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

#include "json.hpp"

namespace pfluid {
namespace {

constexpr double kSlack = 1e-12;

bool within(double lhs, double rhs, double scale) { return lhs <= rhs + kSlack * (1.0 + scale); }

// γ₁(λ+b)^{p-2} b², continuous at b = 0.
double coercive_term(const GronwallData& d, double b) {
  if (b <= 0.0) return 0.0;
  return d.gamma1 * std::pow(d.lambda + b, d.p - 2.0) * b * b;
}

double sum_sq_k(const std::vector<double>& v, double k, std::size_t from = 0) {
  double s = 0.0;
  for (std::size_t i = from; i < v.size(); ++i) s += v[i] * v[i];
  return k * s;
}

struct Sampler {
  std::mt19937_64& rng;
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
};

// Largest x in [0, ∞) with g(x) <= 0, given g(0) <= 0 and g -> ∞.
template <class G>
double sublevel_end(G&& g) {
  double hi = 1.0;
  while (g(hi) <= 0.0 && hi < 1e150) hi *= 2.0;
  double lo = 0.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) <= 0.0 ? lo : hi) = mid;
  }
  return lo;
}

void fill_budget(Sampler& rs, std::vector<double>& v, double k, double budget) {
  std::vector<double> w(v.size());
  double total = 0.0;
  for (double& x : w) {
    x = -std::log(rs.uniform(1e-12, 1.0));
    total += x;
  }
  const double fraction = std::pow(rs.uniform(0.0, 1.0), 0.25) * (1.0 - 1e-9);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sqrt(budget * fraction * w[i] / (k * total));
}

}  // namespace

void GronwallData::validate() const {
  auto require = [](bool ok, const char* field, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("gronwall data '") + field + "': " + what);
  };
  require(k > 0.0 && std::isfinite(k), "k", "must be > 0");
  require(h > 0.0 && std::isfinite(h), "h", "must be > 0");
  require(p > 1.0 && p <= 2.0, "p", "must lie in (1, 2]");
  require(Lambda > 0.0 && std::isfinite(Lambda), "Lambda", "must be > 0");
  require(lambda >= 0.0 && lambda <= Lambda, "lambda", "must lie in [0, Lambda]");
  require(theta > 0.0 && theta <= 1.0, "theta", "must lie in (0, 1]");
  require(gamma0 > 0.0 && std::isfinite(gamma0), "gamma0", "must be > 0");
  require(gamma1 > 0.0 && std::isfinite(gamma1), "gamma1", "must be > 0");
  require(gamma2 > 0.0 && std::isfinite(gamma2), "gamma2", "must be > 0");
  require(gamma3 > 0.0 && std::isfinite(gamma3), "gamma3", "must be > 0");
  require(a.size() >= 2, "a", "needs at least two entries (M >= 1)");
  require(b.size() == a.size() && r.size() == a.size() && s.size() == a.size(), "b/r/s",
          "all sequences must have the length of a");
  for (std::size_t m = 0; m < a.size(); ++m) {
    require(a[m] >= 0.0 && std::isfinite(a[m]), "a", "entries must be finite and >= 0");
    require(b[m] >= 0.0 && std::isfinite(b[m]), "b", "entries must be finite and >= 0");
    require(std::isfinite(r[m]), "r", "entries must be finite");
    require(std::isfinite(s[m]), "s", "entries must be finite");
  }
}

double measured_gamma0(const GronwallData& d) {
  const double h2 = d.h * d.h;
  return std::max({d.a.front() * d.a.front() / h2, d.b.front() * d.b.front() / h2,
                   sum_sq_k(d.r, d.k) / h2, sum_sq_k(d.s, d.k) / h2});
}

HypothesisFlags check_hypotheses(const GronwallData& d) {
  d.validate();
  const double bound = d.gamma0 * d.h * d.h;
  HypothesisFlags f;
  f.a0 = d.a.front() * d.a.front() <= bound;
  f.b0 = d.b.front() * d.b.front() <= bound;
  f.r_sum = sum_sq_k(d.r, d.k) <= bound;
  f.s_sum = sum_sq_k(d.s, d.k) <= bound;
  f.h_bound = d.h < 1.0 / std::sqrt(d.gamma0);
  return f;
}

bool RecursionFlags::all_bis() const { return std::all_of(bis.begin(), bis.end(), [](bool b) { return b; }); }
bool RecursionFlags::all_ter() const { return std::all_of(ter.begin(), ter.end(), [](bool b) { return b; }); }
int RecursionFlags::first_failure() const {
  for (std::size_t i = 0; i < bis.size(); ++i) {
    if (!bis[i] || !ter[i]) return static_cast<int>(i) + 1;
  }
  return 0;
}

RecursionFlags check_recursions(const GronwallData& d) {
  d.validate();
  RecursionFlags f;
  for (int m = 1; m <= d.steps(); ++m) {
    const double now = d.a[m] * d.a[m] / d.k;
    const double before = d.a[m - 1] * d.a[m - 1] / d.k;
    const double coercive = coercive_term(d, d.b[m]);
    const double lhs = now - before + coercive;
    const double transport = d.b[m] * d.r[m];
    const double source = d.s[m] * d.s[m];
    const double lag = d.gamma2 * d.b[m - 1] * d.b[m];
    const double mixed = d.gamma3 * d.b[m] * std::pow(d.b[m - 1], 1.0 - d.theta) * std::pow(d.a[m], d.theta);
    const double base = now + before + coercive + std::abs(transport) + source;
    f.bis.push_back(within(lhs, transport + lag + source, base + lag));
    f.ter.push_back(within(lhs, transport + mixed + source, base + mixed));
  }
  return f;
}

GronwallConstants derive_constants(const GronwallData& d) {
  d.validate();
  GronwallConstants c;
  const double L = std::max(d.Lambda, 1.0);
  c.omega_min = d.gamma1 * std::pow(d.Lambda + L, d.p - 2.0);
  c.rho = std::pow((d.Lambda + L) / d.Lambda, 2.0 - d.p);
  const double g3sq = d.gamma3 * d.gamma3;
  if (d.theta < 1.0) {
    c.eta = c.omega_min * c.omega_min / (4.0 * g3sq * (1.0 - d.theta));
    c.gamma5 = g3sq / c.omega_min * d.theta * std::pow(c.eta, -(1.0 - d.theta) / d.theta);
  } else {
    c.eta = 0.0;
    c.gamma5 = g3sq / c.omega_min;
  }
  c.alpha = d.gamma0 * (2.0 + c.omega_min / 4.0 + 1.0 / c.omega_min);
  const double growth = std::exp(2.0 * c.gamma5 * d.k * d.steps());
  const double start = d.gamma0 / (std::min(1.0, std::pow(2.0 * d.Lambda, 2.0 - d.p) / d.gamma1) * growth);
  c.gamma4 = std::max(2.0 * (1.0 + 4.0 * c.rho) * c.alpha, start);
  c.k_bar = std::min(1.0, 1.0 / (2.0 * c.gamma5));
  c.bracket = 2.0 * d.gamma0 + d.gamma0 / d.gamma1 +
              d.gamma2 * d.gamma2 / d.gamma1 * (d.gamma0 + 8.0 * c.alpha * growth / c.omega_min);
  c.gamma0_bar = d.gamma1 / (2.0 * std::pow(1.0 + d.Lambda, 2.0 * (2.0 - d.p)) * c.bracket);
  return c;
}

std::string to_string(GronwallStatus status) {
  switch (status) {
    case GronwallStatus::Holds: return "holds";
    case GronwallStatus::Violated: return "violated";
    case GronwallStatus::NotApplicable: return "not applicable";
  }
  return "unknown";
}

GronwallVerdict verify_conclusion(const GronwallData& d, const GronwallConstants& c) {
  GronwallVerdict v;
  v.hypotheses = check_hypotheses(d);
  v.recursions = check_recursions(d);
  v.constants = c;
  v.coupling_ok = d.h * d.h < c.gamma0_bar * d.k;
  v.step_ok = d.k < c.k_bar;
  v.applicable = v.hypotheses.all() && v.recursions.all_bis() && v.recursions.all_ter() && v.coupling_ok &&
                 v.step_ok;

  const int M = d.steps();
  const double omega = d.gamma1 * std::pow(d.lambda + d.Lambda, d.p - 2.0);
  double max_a2 = 0.0, max_b = 0.0;
  for (int m = 1; m <= M; ++m) {
    max_a2 = std::max(max_a2, d.a[m] * d.a[m]);
    max_b = std::max(max_b, d.b[m]);
  }
  v.energy_lhs = max_a2 + omega * sum_sq_k(d.b, d.k, 1);
  v.energy_rhs = c.gamma4 * d.h * d.h * std::exp(2.0 * c.gamma5 * d.k * M);
  v.b_bound = max_b <= 1.0;
  v.energy_bound = within(v.energy_lhs, v.energy_rhs, v.energy_lhs + v.energy_rhs);

  const double lhs0 = std::max(max_a2, d.a[0] * d.a[0]) + omega * sum_sq_k(d.b, d.k);
  v.b_bound_from_zero = std::max(max_b, d.b[0]) <= 1.0;
  v.energy_bound_from_zero = within(lhs0, 2.0 * v.energy_rhs, lhs0 + 2.0 * v.energy_rhs);

  if (!v.applicable) {
    v.status = GronwallStatus::NotApplicable;
  } else if (v.b_bound && v.energy_bound && v.b_bound_from_zero && v.energy_bound_from_zero) {
    v.status = GronwallStatus::Holds;
  } else {
    v.status = GronwallStatus::Violated;
  }
  return v;
}

GronwallVerdict verify_conclusion(const GronwallData& d) { return verify_conclusion(d, derive_constants(d)); }

std::vector<double> classical_gronwall_bound(double alpha, double k, const std::vector<double>& beta) {
  std::vector<double> out(beta.size() + 1);
  double acc = 0.0;
  out[0] = alpha;
  for (std::size_t m = 1; m <= beta.size(); ++m) {
    acc += k * beta[m - 1];
    out[m] = alpha * std::exp(acc);
  }
  return out;
}

std::vector<double> classical_gronwall_extremal(double alpha, double k, const std::vector<double>& beta) {
  std::vector<double> x(beta.size() + 1);
  double acc = 0.0;
  for (std::size_t m = 0; m <= beta.size(); ++m) {
    x[m] = alpha + acc;
    if (m < beta.size()) acc += k * beta[m] * x[m];
  }
  return x;
}

GronwallData generate_admissible(std::mt19937_64& rng) {
  Sampler rs{rng};
  GronwallData d;
  d.p = rs.uniform(0.0, 1.0) < 0.2 ? 2.0 : rs.uniform(1.2, 2.0);
  d.gamma1 = rs.log_uniform(0.1, 10.0);
  d.gamma2 = rs.log_uniform(0.1, 10.0);
  d.gamma3 = rs.log_uniform(0.1, 10.0);
  d.Lambda = rs.log_uniform(0.1, 10.0);
  d.lambda = rs.uniform(0.0, 1.0) < 0.2 ? 0.0 : rs.uniform(0.0, d.Lambda);
  d.theta = rs.uniform(0.0, 1.0) < 0.2 ? 1.0 : rs.uniform(0.1, 1.0);
  d.gamma0 = rs.log_uniform(0.01, 10.0);
  const int M = rs.integer(1, 40);
  d.a.assign(M + 1, 0.0);
  d.b.assign(M + 1, 0.0);
  d.r.assign(M + 1, 0.0);
  d.s.assign(M + 1, 0.0);
  d.k = 0.5;
  d.h = 1e-3;

  // k̄ does not depend on k or h; γ̄₀ depends on k only.
  d.k = derive_constants(d).k_bar * rs.uniform(0.05, 0.95);
  const GronwallConstants c = derive_constants(d);
  d.h = std::min(std::sqrt(c.gamma0_bar * d.k), 1.0 / std::sqrt(d.gamma0)) * rs.uniform(0.1, 0.99);

  const double budget = d.gamma0 * d.h * d.h;
  d.a[0] = std::sqrt(budget * std::pow(rs.uniform(0.0, 1.0), 0.25) * (1.0 - 1e-9));
  d.b[0] = std::sqrt(budget * std::pow(rs.uniform(0.0, 1.0), 0.25) * (1.0 - 1e-9));
  fill_budget(rs, d.r, d.k, budget);
  fill_budget(rs, d.s, d.k, budget);

  for (int m = 1; m <= M; ++m) {
    const double carry = d.a[m - 1] * d.a[m - 1];
    // With a_m = 0 the third-order coupling vanishes and (ter) is the binding one.
    auto infeasible = [&](double b) {
      return coercive_term(d, b) - b * d.r[m] - d.s[m] * d.s[m] - carry / d.k;
    };
    double b = sublevel_end(infeasible) * std::pow(rs.uniform(0.0, 1.0), 0.3);
    while (b > 0.0 && infeasible(b) > 0.0) b *= 0.5;
    d.b[m] = b;

    const double drive = b * d.r[m] + d.s[m] * d.s[m] - coercive_term(d, b);
    const double cap_bis = carry + d.k * (drive + d.gamma2 * d.b[m - 1] * b);
    const double mix = d.k * d.gamma3 * b * std::pow(d.b[m - 1], 1.0 - d.theta);
    const double cap_ter = carry + d.k * drive;
    const double a_ter = sublevel_end([&](double a) { return a * a - mix * std::pow(a, d.theta) - cap_ter; });
    const double a_max = std::min(std::sqrt(std::max(cap_bis, 0.0)), a_ter);
    d.a[m] = a_max * std::pow(rs.uniform(0.0, 1.0), 0.2) * (1.0 - 1e-9);
  }
  return d;
}

std::string to_string(GronwallViolation v) {
  switch (v) {
    case GronwallViolation::InitialA: return "initial-a";
    case GronwallViolation::InitialB: return "initial-b";
    case GronwallViolation::RSum: return "r-sum";
    case GronwallViolation::SSum: return "s-sum";
    case GronwallViolation::HBound: return "h-bound";
    case GronwallViolation::Recursion: return "recursion";
    case GronwallViolation::Coupling: return "coupling";
    case GronwallViolation::StepSize: return "step-size";
  }
  return "unknown";
}

GronwallData inject_violation(GronwallData d, GronwallViolation v, std::mt19937_64& rng) {
  Sampler rs{rng};
  const double budget = d.gamma0 * d.h * d.h;
  auto rescale = [&](std::vector<double>& seq) {
    const double target = budget * rs.uniform(1.1, 3.0);
    const double current = sum_sq_k(seq, d.k);
    if (current > 0.0) {
      for (double& x : seq) x *= std::sqrt(target / current);
    } else {
      seq[0] = std::sqrt(target / d.k);
    }
  };
  switch (v) {
    case GronwallViolation::InitialA: d.a[0] = std::sqrt(budget * rs.uniform(1.1, 3.0)); break;
    case GronwallViolation::InitialB: d.b[0] = std::sqrt(budget * rs.uniform(1.1, 3.0)); break;
    case GronwallViolation::RSum: rescale(d.r); break;
    case GronwallViolation::SSum: rescale(d.s); break;
    case GronwallViolation::HBound: d.gamma0 = rs.uniform(1.0, 3.0) / (d.h * d.h); break;
    case GronwallViolation::Recursion: {
      const int m = rs.integer(1, d.steps());
      const double carry = d.a[m - 1] * d.a[m - 1];
      const double rhs = d.b[m] * d.r[m] + d.gamma2 * d.b[m - 1] * d.b[m] + d.s[m] * d.s[m] -
                         coercive_term(d, d.b[m]);
      const double cap = std::max(carry + d.k * rhs, 0.0);
      d.a[m] = std::sqrt(cap + rs.uniform(0.1, 1.0) * (1.0 + carry));
      break;
    }
    case GronwallViolation::Coupling: d.h = std::sqrt(2.0 * derive_constants(d).gamma0_bar * d.k); break;
    case GronwallViolation::StepSize: d.k = derive_constants(d).k_bar * rs.uniform(1.0, 1.5); break;
  }
  return d;
}

bool violation_flagged(const GronwallVerdict& verdict, GronwallViolation v) {
  if (verdict.status == GronwallStatus::Holds) return false;
  switch (v) {
    case GronwallViolation::InitialA: return !verdict.hypotheses.a0;
    case GronwallViolation::InitialB: return !verdict.hypotheses.b0;
    case GronwallViolation::RSum: return !verdict.hypotheses.r_sum;
    case GronwallViolation::SSum: return !verdict.hypotheses.s_sum;
    case GronwallViolation::HBound: return !verdict.hypotheses.h_bound;
    case GronwallViolation::Recursion: return !verdict.recursions.all_bis();
    case GronwallViolation::Coupling: return !verdict.coupling_ok;
    case GronwallViolation::StepSize: return !verdict.step_ok;
  }
  return false;
}

// ---- bundle IO -------------------------------------------------------------

namespace {

using Json = nlohmann::json;

std::map<std::string, double*> scalar_fields(GronwallData& d) {
  return {{"k", &d.k},           {"h", &d.h},           {"p", &d.p},
          {"lambda", &d.lambda}, {"Lambda", &d.Lambda}, {"theta", &d.theta},
          {"gamma0", &d.gamma0}, {"gamma1", &d.gamma1}, {"gamma2", &d.gamma2},
          {"gamma3", &d.gamma3}};
}

double parse_number(const std::string& text, int line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw BundleError("line " + std::to_string(line) + ": '" + text + "' is not a number");
  }
  return v;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

void write_gronwall_csv(std::ostream& out, const GronwallData& data) {
  GronwallData d = data;
  out << "# pfluid-lab v1\n";
  if (d.proxy) out << "# proxy: sequences from the exact solution\n";
  out << std::setprecision(17);
  for (const auto& [name, ptr] : scalar_fields(d)) out << "param," << name << ',' << *ptr << '\n';
  out << "param,proxy," << (d.proxy ? 1 : 0) << '\n';
  out << "m,a,b,r,s\n";
  for (std::size_t m = 0; m < d.a.size(); ++m) {
    out << m << ',' << d.a[m] << ',' << d.b[m] << ',' << d.r[m] << ',' << d.s[m] << '\n';
  }
}

GronwallData read_gronwall_csv(std::istream& in) {
  GronwallData d;
  auto fields = scalar_fields(d);
  std::map<std::string, bool> seen;
  std::string line;
  int number = 0;
  bool in_rows = false;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::vector<std::string> cells = split(line);
    if (!in_rows) {
      if (line == "m,a,b,r,s") {
        in_rows = true;
        continue;
      }
      if (cells.size() != 3 || cells[0] != "param") {
        throw BundleError("line " + std::to_string(number) + ": expected 'param,<name>,<value>' or 'm,a,b,r,s'");
      }
      if (cells[1] == "proxy") {
        d.proxy = parse_number(cells[2], number) != 0.0;
        continue;
      }
      const auto it = fields.find(cells[1]);
      if (it == fields.end()) {
        throw BundleError("line " + std::to_string(number) + ": unknown parameter '" + cells[1] + "'");
      }
      *it->second = parse_number(cells[2], number);
      seen[cells[1]] = true;
      continue;
    }
    if (cells.size() != 5) {
      throw BundleError("line " + std::to_string(number) + ": expected 5 columns, found " +
                        std::to_string(cells.size()));
    }
    const double m = parse_number(cells[0], number);
    if (m != static_cast<double>(d.a.size())) {
      throw BundleError("line " + std::to_string(number) + ": expected m = " + std::to_string(d.a.size()));
    }
    d.a.push_back(parse_number(cells[1], number));
    d.b.push_back(parse_number(cells[2], number));
    d.r.push_back(parse_number(cells[3], number));
    d.s.push_back(parse_number(cells[4], number));
  }
  for (const auto& [name, ptr] : fields) {
    if (!seen[name]) throw BundleError("missing parameter '" + name + "'");
  }
  if (!in_rows) throw BundleError("missing 'm,a,b,r,s' header");
  try {
    d.validate();
  } catch (const std::invalid_argument& e) {
    throw BundleError(e.what());
  }
  return d;
}

std::string gronwall_json(const GronwallData& data) {
  GronwallData d = data;
  Json j;
  for (const auto& [name, ptr] : scalar_fields(d)) j[name] = *ptr;
  j["proxy"] = d.proxy;
  j["a"] = d.a;
  j["b"] = d.b;
  j["r"] = d.r;
  j["s"] = d.s;
  return j.dump(2);
}

GronwallData gronwall_from_json(const std::string& text) {
  GronwallData d;
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw BundleError(std::string("malformed JSON: ") + e.what());
  }
  try {
    for (const auto& [name, ptr] : scalar_fields(d)) {
      if (!j.contains(name)) throw BundleError("missing field '" + name + "'");
      *ptr = j.at(name).get<double>();
    }
    d.proxy = j.value("proxy", false);
    for (const char* name : {"a", "b", "r", "s"}) {
      if (!j.contains(name)) throw BundleError(std::string("missing field '") + name + "'");
    }
    d.a = j.at("a").get<std::vector<double>>();
    d.b = j.at("b").get<std::vector<double>>();
    d.r = j.at("r").get<std::vector<double>>();
    d.s = j.at("s").get<std::vector<double>>();
    d.validate();
  } catch (const Json::exception& e) {
    throw BundleError(std::string("bad field type: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw BundleError(e.what());
  }
  return d;
}

GronwallData read_gronwall_bundle(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BundleError("cannot open '" + path + "'");
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) {
    std::stringstream ss;
    ss << in.rdbuf();
    return gronwall_from_json(ss.str());
  }
  return read_gronwall_csv(in);
}

std::string verdict_json(const GronwallData& d, const GronwallVerdict& v) {
  Json j;
  j["proxy"] = d.proxy;
  j["status"] = to_string(v.status);
  j["conclusion_ok"] = v.conclusion_ok();
  j["hypotheses"] = {{"a0", v.hypotheses.a0},       {"b0", v.hypotheses.b0},
                     {"r_sum", v.hypotheses.r_sum}, {"s_sum", v.hypotheses.s_sum},
                     {"h_bound", v.hypotheses.h_bound}, {"all", v.hypotheses.all()}};
  j["recursions"] = {{"bis", v.recursions.bis},
                     {"ter", v.recursions.ter},
                     {"all_bis", v.recursions.all_bis()},
                     {"all_ter", v.recursions.all_ter()},
                     {"first_failure", v.recursions.first_failure()}};
  j["constants"] = {{"gamma4", v.constants.gamma4},
                    {"gamma5", v.constants.gamma5},
                    {"k_bar", v.constants.k_bar},
                    {"gamma0_bar", v.constants.gamma0_bar},
                    {"omega_min", v.constants.omega_min},
                    {"rho", v.constants.rho},
                    {"alpha", v.constants.alpha},
                    {"bracket", v.constants.bracket},
                    {"gamma5_formula",
                     "reconstructed: (gamma3^2/omega_min)*theta*eta^(-(1-theta)/theta), "
                     "eta = omega_min^2/(4 gamma3^2 (1-theta)); gamma3^2/omega_min for theta = 1"}};
  j["coupling_ok"] = v.coupling_ok;
  j["step_ok"] = v.step_ok;
  j["applicable"] = v.applicable;
  j["conclusion"] = {{"max_b_le_1", v.b_bound},
                     {"energy_bound", v.energy_bound},
                     {"max_b_le_1_from_zero", v.b_bound_from_zero},
                     {"energy_bound_from_zero", v.energy_bound_from_zero},
                     {"energy_lhs", v.energy_lhs},
                     {"energy_rhs", v.energy_rhs}};
  return j.dump(2);
}

}  // namespace pfluid
