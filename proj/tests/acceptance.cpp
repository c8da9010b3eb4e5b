// Acceptance harness: one PASS/FAIL line per criterion, exit status 1 on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pfluid/diagnostics.hpp"
#include "pfluid/errors.hpp"
#include "pfluid/gronwall.hpp"
#include "pfluid/mesh.hpp"
#include "pfluid/projection.hpp"
#include "pfluid/properties.hpp"
#include "pfluid/rates.hpp"
#include "pfluid/solver.hpp"

using namespace pfluid;

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kSeed = 20261016;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void report(int id, const std::string& name, double limit_seconds, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto start = Clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.require(false, std::string("exception: ") + e.what());
  }
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  if (limit_seconds > 0.0) o.require(seconds < limit_seconds, "runtime");
  if (!o.pass) ++failures;
  std::printf("%s %d %s (%.1f s):%s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), seconds, o.detail.str().c_str());
  std::fflush(stdout);
}

void property_line(Outcome& o, const PropertyResult& r) {
  o.require(r.passed(), r.name);
  o.detail << "\n    " << r.name << ": " << r.samples << " samples, " << r.failures << " failures, extremes ["
           << r.worst_low << ", " << r.worst_high << "]";
  if (!r.detail.empty()) o.detail << " (" << r.detail << ")";
}

PDeltaParams params_of(double p, double delta) {
  PDeltaParams params;
  params.p = p;
  params.delta = delta;
  return params;
}

FieldSample field_sin_product(const Vec& x) {
  FieldSample f{Vec(2), Mat(2, 2)};
  f.value << std::sin(x[0]) * std::sin(x[1]), std::cos(x[0]) * std::cos(x[1]);
  f.gradient << std::cos(x[0]) * std::sin(x[1]), std::sin(x[0]) * std::cos(x[1]),
      -std::sin(x[0]) * std::cos(x[1]), -std::cos(x[0]) * std::sin(x[1]);
  return f;
}

FieldSample field_shear(const Vec& x) {
  FieldSample f{Vec(2), Mat(2, 2)};
  f.value << std::sin(x[1]), std::sin(x[0]);
  f.gradient << 0.0, std::cos(x[1]), std::cos(x[0]), 0.0;
  return f;
}

FieldSample field_compressive(const Vec& x) {
  FieldSample f{Vec(2), Mat(2, 2)};
  f.value << std::sin(2.0 * x[0]) + std::cos(x[1]), std::sin(x[0] + x[1]);
  f.gradient << 2.0 * std::cos(2.0 * x[0]), -std::sin(x[1]), std::cos(x[0] + x[1]), std::cos(x[0] + x[1]);
  return f;
}

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

struct PipelineLevel {
  double h = 0.0;
  double k = 0.0;
  double k_sum_r2 = 0.0;
  bool bis = false;
  bool ter = false;
  bool proxy = false;
};

std::vector<PipelineLevel> pipeline;

void criterion_convergence(Outcome& o) {
  const std::vector<int> meshes = {8, 16, 32};
  for (double p : {1.6, 1.8, 2.0}) {
    for (double delta : {0.0, 0.05}) {
      ConvergenceSetup setup;
      setup.params = params_of(p, delta);
      setup.subdivisions = meshes;
      setup.c3 = 1.0;
      setup.T = 0.5;
      const bool diagnose = p == 1.8 && delta == 0.0;
      const ConvergenceTable t = run_convergence(setup, [&](const LevelContext& level) {
        if (!diagnose) return;
        const GronwallDiagnostics diag =
            gronwall_diagnostics(level.space, level.run, level.row.k, level.solution, level.setup.params);
        const RecursionFlags rec = check_recursions(diag.data);
        PipelineLevel pl;
        pl.h = level.row.h;
        pl.k = level.row.k;
        for (double r : diag.data.r) pl.k_sum_r2 += level.row.k * r * r;
        pl.bis = rec.all_bis();
        pl.ter = rec.all_ter();
        pl.proxy = diag.data.proxy;
        pipeline.push_back(pl);
      });
      const ConvergenceRow& finest = t.rows.back();
      const double eoc = finest.eoc_total.value_or(std::nan(""));
      std::ostringstream tag;
      tag << "p=" << p << " delta=" << delta;
      o.require(eoc >= 0.8, tag.str() + " eoc");
      o.require(t.monotone(), tag.str() + " monotone");
      o.detail << "\n    " << tag.str() << ": totals";
      for (const ConvergenceRow& r : t.rows) o.detail << ' ' << r.total << " (M=" << r.steps << ")";
      o.detail << ", finest eoc " << eoc << (t.monotone() ? ", monotone" : ", not monotone");
    }
  }

  const PeriodicMesh mesh = build_structured(3, 4);
  const TaylorHoodSpace space(mesh);
  const auto sol = make_beltrami_3d();
  RunConfig rc;
  rc.params = params_of(2.0, 0.05);
  rc.space = &space;
  rc.steps = 5;
  rc.k = 0.1;
  rc.forcing = forcing_from_solution(rc.params, *sol);
  rc.initial_velocity = sol->velocity_field(0.0);
  const RunResult r = run(rc);
  bool finite = std::isfinite(r.energy_bound);
  for (const EnergyTerms& e : r.energy) {
    finite = finite && std::isfinite(e.lhs()) && std::isfinite(e.rhs());
  }
  o.require(r.steps.size() == 5 && finite, "3D smoke energies");
  o.detail << "\n    3D n=4 p=2 delta=0.05, 5 steps: energy bound " << r.energy_bound;
}

}  // namespace

int main() {
  std::cout.precision(4);

  report(1, "constitutive property suite", 10.0, [](Outcome& o) {
    o.detail.precision(4);
    for (const PropertyResult& r : constitutive_properties(kSeed, 10000).results) property_line(o, r);
  });

  report(2, "conjugate identity", 5.0, [](Outcome& o) { property_line(o, conjugate_identity(kSeed, 1000)); });

  report(3, "stress Jacobian vs finite differences", 5.0,
         [](Outcome& o) { property_line(o, jacobian_consistency(kSeed, 1000)); });

  report(4, "projection suite", 60.0, [](Outcome& o) {
    const PeriodicMesh mesh = build_structured(2, 8);
    const TaylorHoodSpace space(mesh);
    const DivergenceProjector proj(space);
    double worst = 0.0;
    for (const VectorField& w : {VectorField(field_sin_product), VectorField(field_shear),
                                 VectorField(field_compressive)}) {
      worst = std::max(worst, divergence_moment_defect(w, proj.apply(w)));
    }
    o.require(worst <= 1e-10, "moment preservation");
    const ProjectionOrderReport r = check_projection_orders(
        2, {8, 16, 32}, field_shear, [](const Vec& x) { return std::sin(x[0]); }, 2.0);
    o.detail << " moment defect " << worst << "; eoc div L2";
    for (double e : r.eoc_div_l2) {
      o.require(e >= 1.8, "div eoc");
      o.detail << ' ' << e;
    }
    o.detail << "; eoc Clement L2";
    for (double e : r.eoc_y_l2) {
      o.require(e >= 0.9, "Clement eoc");
      o.detail << ' ' << e;
    }
  });

  report(5, "scheme structure", 120.0, [](Outcome& o) {
    const PeriodicMesh small = build_structured(2, 8);
    const TaylorHoodSpace sp(small);
    std::mt19937_64 rng(kSeed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      FEFunction a = FEFunction::zero(sp, FieldKind::Velocity), b = a, c = a;
      for (Eigen::Index j = 0; j < a.coeffs.size(); ++j) {
        a.coeffs[j] = u(rng);
        b.coeffs[j] = u(rng);
        c.coeffs[j] = u(rng);
      }
      const double scale = 1.0 + std::abs(trilinear_b(a, b, c));
      worst = std::max(worst, std::abs(trilinear_b(a, b, b)) / scale);
    }
    o.require(worst <= 1e-12, "b(u,v,v)");

    const PeriodicMesh mesh = build_structured(2, 16);
    const TaylorHoodSpace space(mesh);
    const auto sol = make_taylor_green_2d();
    RunConfig rc;
    rc.params = params_of(1.8, 0.0);
    rc.space = &space;
    rc.steps = 10;
    rc.k = 0.05;
    rc.forcing = forcing_from_solution(rc.params, *sol);
    rc.initial_velocity = sol->velocity_field(0.0);
    const RunResult r = run(rc);
    int holding = 0;
    double margin = INFINITY;
    for (const EnergyTerms& e : r.energy) {
      holding += e.holds() ? 1 : 0;
      margin = std::min(margin, e.rhs() - e.lhs());
    }
    o.require(holding == rc.steps, "energy inequality");
    o.require(std::isfinite(r.energy_bound), "energy bound");
    o.detail << " max |b(u,v,v)|/scale " << worst << "; energy inequality at " << holding << "/" << rc.steps
             << " steps, smallest rhs-lhs " << margin << ", energy bound " << r.energy_bound;
  });

  report(6, "convergence sweep and 3D smoke test", 1800.0, criterion_convergence);

  report(7, "initial-data orders", 60.0, [](Outcome& o) {
    const auto sol = make_taylor_green_2d();
    for (double p : {1.6, 1.8, 2.0}) {
      std::vector<double> h, l2, dp;
      for (int n : {8, 16, 32}) {
        const PeriodicMesh mesh = build_structured(2, n);
        const TaylorHoodSpace space(mesh);
        const VectorField u0 = sol->velocity_field(0.0);
        const VelocityErrorNorms e = velocity_error(pi_div(space, u0), u0, p);
        h.push_back(quality_report(mesh).h);
        l2.push_back(e.l2);
        dp.push_back(e.sym_grad_r);
      }
      o.detail << "\n    p=" << p << ": eoc L2";
      for (int i = 1; i < 3; ++i) {
        const double e = convergence_rate(l2[i - 1], l2[i], h[i - 1], h[i]);
        o.require(e >= 1.8, "L2 eoc");
        o.detail << ' ' << e;
      }
      o.detail << ", eoc D in L^p";
      for (int i = 1; i < 3; ++i) {
        const double e = convergence_rate(dp[i - 1], dp[i], h[i - 1], h[i]);
        o.require(e >= 0.9, "D eoc");
        o.detail << ' ' << e;
      }
    }
  });

  report(8, "Gronwall verifier", 10.0, [](Outcome& o) {
    std::mt19937_64 rng(kSeed);
    int holds = 0, flagged = 0;
    for (int i = 0; i < 1000; ++i) {
      const GronwallData d = generate_admissible(rng);
      if (verify_conclusion(d).conclusion_ok()) ++holds;
    }
    for (int i = 0; i < 1000; ++i) {
      const GronwallData d = generate_admissible(rng);
      const auto kind = static_cast<GronwallViolation>(i % kGronwallViolationCount);
      if (violation_flagged(verify_conclusion(inject_violation(d, kind, rng)), kind)) ++flagged;
    }
    double worst = 0.0;
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (int i = 0; i < 1000; ++i) {
      std::vector<double> beta(1 + i % 50);
      for (double& b : beta) b = u(rng);
      const double alpha = u(rng), k = 0.02 * u(rng);
      const std::vector<double> x = classical_gronwall_extremal(alpha, k, beta);
      const std::vector<double> bound = classical_gronwall_bound(alpha, k, beta);
      for (std::size_t m = 0; m < x.size(); ++m) worst = std::max(worst, (x[m] - bound[m]) / (1.0 + bound[m]));
    }
    o.require(holds == 1000, "admissible instances");
    o.require(flagged == 1000, "injected violations");
    o.require(worst <= 1e-10, "classical Gronwall");
    o.detail << " conclusion holds " << holds << "/1000, violations flagged " << flagged
             << "/1000, classical excess " << worst;
  });

  report(9, "pipeline diagnostics (proxy)", 0.0, [](Outcome& o) {
    o.require(pipeline.size() == 3, "levels recorded by criterion 6");
    if (pipeline.size() != 3) return;
    std::vector<double> h, r2;
    for (const PipelineLevel& l : pipeline) {
      o.require(l.bis, "first recursion");
      o.require(l.proxy, "proxy label");
      h.push_back(l.h);
      r2.push_back(l.k_sum_r2);
      o.detail << "\n    h=" << l.h << " k=" << l.k << ": k sum r^2 " << l.k_sum_r2
               << ", recursions " << (l.bis ? "hold" : "fail") << "/" << (l.ter ? "hold" : "fail");
    }
    const double slope = loglog_slope(h, r2);
    o.require(slope >= 1.8, "k sum r^2 slope");
    o.detail << "\n    log-log slope of k sum r^2 vs h: " << slope;
  });

  std::printf("%s: %d criterion(s) failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
