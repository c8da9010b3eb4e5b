#include "pfluid/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "CLI11.hpp"
#include "pfluid/config.hpp"
#include "pfluid/diagnostics.hpp"
#include "pfluid/errors.hpp"
#include "pfluid/gronwall.hpp"
#include "pfluid/linalg.hpp"
#include "pfluid/mesh.hpp"
#include "pfluid/nfunction.hpp"
#include "pfluid/properties.hpp"

namespace pfluid {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

// Flag overrides on top of an optional JSON config file.
struct ConfigFlags {
  std::string file;
  double p = 0.0, delta = 0.0, mu = 0.0, delta0 = 0.0, c3 = 0.0, T = 0.0;
  int dim = 0, steps = 0;
  std::vector<int> nmesh;
  std::string solution, out;
  std::uint64_t seed = 0;
  std::vector<std::pair<CLI::Option*, std::string>> options;

  void attach(CLI::App& app) {
    app.add_option("--config", file, "JSON experiment config")->check(CLI::ExistingFile);
    options = {
        {app.add_option("--p", p, "power-law exponent"), "p"},
        {app.add_option("--delta", delta, "shift"), "delta"},
        {app.add_option("--mu", mu, "viscosity scale"), "mu"},
        {app.add_option("--delta0", delta0, "upper bound for the shift"), "delta0"},
        {app.add_option("--dim", dim, "space dimension"), "dim"},
        {app.add_option("--nmesh", nmesh, "subdivisions per axis")->delimiter(','), "nmesh"},
        {app.add_option("--c3", c3, "coupling constant"), "c3"},
        {app.add_option("--T", T, "final time"), "T"},
        {app.add_option("--steps", steps, "fixed step count (overrides the coupling schedule)"), "steps"},
        {app.add_option("--solution", solution, "taylor-green-2d | beltrami-3d | zero"), "solution"},
        {app.add_option("--seed", seed, "random seed"), "seed"},
        {app.add_option("--out", out, "output directory"), "out"},
    };
  }

  ExperimentConfig resolve() const {
    Json j = Json::object();
    if (!file.empty()) {
      std::ifstream in(file);
      try {
        j = Json::parse(in);
      } catch (const Json::parse_error& e) {
        throw std::invalid_argument("config file '" + file + "': " + e.what());
      }
    }
    for (const auto& [opt, key] : options) {
      if (opt->count() == 0) continue;
      if (key == "p") j[key] = p;
      else if (key == "delta") j[key] = delta;
      else if (key == "mu") j[key] = mu;
      else if (key == "delta0") j[key] = delta0;
      else if (key == "dim") j[key] = dim;
      else if (key == "nmesh") j[key] = nmesh;
      else if (key == "c3") j[key] = c3;
      else if (key == "T") j[key] = T;
      else if (key == "steps") j[key] = steps;
      else if (key == "solution") j[key] = solution;
      else if (key == "seed") j[key] = seed;
      else if (key == "out") j[key] = out;
    }
    ExperimentConfig config = config_from_json(j);
    config.validate();
    return config;
  }
};

std::ofstream open_output(const fs::path& path) {
  std::ofstream f(path);
  if (!f) throw std::invalid_argument("cannot write '" + path.string() + "'");
  return f;
}

fs::path prepare(const ExperimentConfig& config) {
  const fs::path dir(config.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::invalid_argument("config field 'out': cannot create '" + config.out + "'");
  open_output(dir / "config.json") << to_json(config).dump(2) << '\n';
  return dir;
}

PDeltaParams params_of(const ExperimentConfig& c) {
  PDeltaParams params;
  params.p = c.p;
  params.delta = c.delta;
  params.mu = c.mu;
  return params;
}

int cmd_run(const ExperimentConfig& config, std::ostream& out) {
  if (config.nmesh.size() != 1) {
    throw std::invalid_argument("config field 'nmesh': run takes exactly one mesh size");
  }
  const fs::path dir = prepare(config);
  const PDeltaParams params = params_of(config);
  const PeriodicMesh mesh = build_structured(config.dim, config.nmesh.front());
  const TaylorHoodSpace space(mesh);
  const double h = quality_report(mesh).h;
  const int steps = config.steps > 0 ? config.steps
                                     : step_count(config.T, coupling_schedule(config.p, h, config.c3));
  const auto sol = make_solution(config.solution, config.dim);

  RunConfig rc;
  rc.params = params;
  rc.space = &space;
  rc.k = config.T / steps;
  rc.steps = steps;
  rc.forcing = forcing_from_solution(params, *sol);
  rc.initial_velocity = sol->velocity_field(0.0);
  const RunResult result = run(rc);
  const ErrorSeries errors = measure_errors(result, rc.k, *sol, params);

  {
    std::ofstream f = open_output(dir / "steps.csv");
    write_step_csv(f, result);
  }
  {
    std::ofstream f = open_output(dir / "errors.csv");
    f << "# pfluid-lab v1\nm,t,a,b,nd\n" << std::setprecision(12);
    for (std::size_t m = 0; m < errors.a.size(); ++m) {
      f << m << ',' << errors.t[m] << ',' << errors.a[m] << ',' << errors.b[m] << ',' << errors.nd[m] << '\n';
    }
  }
  {
    std::ofstream f = open_output(dir / "state.csv");
    const DiscreteState& last = result.states.back();
    f << "# pfluid-lab v1\n# m=" << last.m << " t=" << std::setprecision(17) << last.t << "\nfield,index,value\n";
    for (Eigen::Index i = 0; i < last.u.coeffs.size(); ++i) f << "u," << i << ',' << last.u.coeffs[i] << '\n';
    for (Eigen::Index i = 0; i < last.pi.coeffs.size(); ++i) f << "pi," << i << ',' << last.pi.coeffs[i] << '\n';
  }

  bool energy_ok = true;
  for (const EnergyTerms& e : result.energy) energy_ok = energy_ok && e.holds();
  out << "run " << config.solution << " dim=" << config.dim << " n=" << config.nmesh.front() << " h=" << h
      << " k=" << rc.k << " M=" << steps << '\n';
  out << "  energy bound " << result.energy_bound << ", per-step energy inequality "
      << (energy_ok ? "holds" : "FAILS") << '\n';
  out << "  max a^2 " << errors.max_a2() << ", k sum nd " << errors.k_sum_nd() << ", total " << errors.total()
      << '\n';
  out << "  wrote " << (dir / "steps.csv").string() << ", errors.csv, state.csv\n";
  return kExitOk;
}

int cmd_convergence(const ExperimentConfig& config, std::ostream& out) {
  if (config.nmesh.size() < 2) {
    throw std::invalid_argument("config field 'nmesh': convergence needs at least two mesh sizes");
  }
  const fs::path dir = prepare(config);
  ConvergenceSetup setup;
  setup.params = params_of(config);
  setup.dim = config.dim;
  setup.subdivisions = config.nmesh;
  setup.c3 = config.c3;
  setup.T = config.T;
  setup.solution = config.solution;

  const ConvergenceTable table = run_convergence(setup, [&](const LevelContext& level) {
    const GronwallDiagnostics diag =
        gronwall_diagnostics(level.space, level.run, level.row.k, level.solution, level.setup.params);
    std::ofstream f = open_output(dir / ("gronwall_n" + std::to_string(level.row.n) + ".csv"));
    write_gronwall_csv(f, diag.data);
  });
  {
    std::ofstream f = open_output(dir / "convergence.csv");
    write_convergence_csv(f, table);
  }

  out << "convergence " << config.solution << " p=" << config.p << " delta=" << config.delta << '\n';
  out << std::setw(6) << "n" << std::setw(12) << "h" << std::setw(12) << "k" << std::setw(5) << "M"
      << std::setw(14) << "total" << std::setw(10) << "eoc" << '\n';
  for (const ConvergenceRow& r : table.rows) {
    out << std::setw(6) << r.n << std::setw(12) << std::setprecision(5) << r.h << std::setw(12) << r.k
        << std::setw(5) << r.steps << std::setw(14) << std::setprecision(6) << r.total << std::setw(10);
    if (r.eoc_total) {
      out << std::setprecision(3) << *r.eoc_total;
    } else {
      out << "-";
    }
    out << (r.coupling_satisfied ? "" : "  (T < k_min: single step)") << '\n';
  }
  out << "  monotone decrease: " << (table.monotone() ? "yes" : "no") << '\n';
  out << "  wrote " << (dir / "convergence.csv").string() << " and proxy Gronwall bundles\n";
  return kExitOk;
}

int cmd_props(std::uint64_t seed, int count, const std::string& path, std::ostream& out) {
  if (count < 1) throw std::invalid_argument("props: --count must be >= 1");
  const PropertyReport report = all_properties(seed, count);
  Json j;
  j["seed"] = seed;
  j["count"] = count;
  j["passed"] = report.passed();
  for (const PropertyResult& r : report.results) {
    j["results"].push_back({{"name", r.name},
                            {"samples", r.samples},
                            {"failures", r.failures},
                            {"worst_low", r.worst_low},
                            {"worst_high", r.worst_high},
                            {"detail", r.detail}});
    out << (r.passed() ? "PASS " : "FAIL ") << std::left << std::setw(34) << r.name << std::right
        << " samples " << std::setw(6) << r.samples << "  worst [" << std::setprecision(6) << r.worst_low
        << ", " << r.worst_high << "]";
    if (!r.passed()) out << "  failures " << r.failures;
    out << '\n';
  }
  if (!path.empty()) open_output(path) << j.dump(2) << '\n';
  return report.passed() ? kExitOk : kExitProperty;
}

int cmd_gronwall(const std::string& bundle, const std::string& path, std::ostream& out) {
  const GronwallData data = read_gronwall_bundle(bundle);
  const GronwallVerdict verdict = verify_conclusion(data);
  const std::string text = verdict_json(data, verdict);
  if (path.empty()) {
    out << text << '\n';
  } else {
    open_output(path) << text << '\n';
    out << "gronwall " << bundle << (data.proxy ? " (proxy)" : "") << ": " << to_string(verdict.status)
        << ", recursions " << (verdict.recursions.all_bis() && verdict.recursions.all_ter() ? "hold" : "fail")
        << '\n';
  }
  return verdict.status == GronwallStatus::Violated ? kExitProperty : kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"p-fluid finite element lab"};
  app.name("pfluid-lab");
  app.require_subcommand(1);

  ConfigFlags run_flags, conv_flags;
  CLI::App* run_cmd = app.add_subcommand("run", "single simulation on one mesh");
  run_flags.attach(*run_cmd);
  CLI::App* conv_cmd = app.add_subcommand("convergence", "mesh sweep with rates and Gronwall bundles");
  conv_flags.attach(*conv_cmd);

  std::uint64_t props_seed = 20261016;
  int props_count = 10000;
  std::string props_out;
  CLI::App* props_cmd = app.add_subcommand("props", "sampled constitutive invariants");
  props_cmd->add_option("--seed", props_seed, "random seed");
  props_cmd->add_option("--count", props_count, "samples per invariant");
  props_cmd->add_option("--out", props_out, "JSON report path");

  std::string bundle, verdict_out;
  CLI::App* gw_cmd = app.add_subcommand("gronwall", "verify a Gronwall bundle (CSV or JSON)");
  gw_cmd->add_option("bundle", bundle, "bundle path")->required();
  gw_cmd->add_option("--out", verdict_out, "verdict JSON path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*run_cmd) return cmd_run(run_flags.resolve(), out);
    if (*conv_cmd) return cmd_convergence(conv_flags.resolve(), out);
    if (*props_cmd) return cmd_props(props_seed, props_count, props_out, out);
    if (*gw_cmd) return cmd_gronwall(bundle, verdict_out, out);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const BundleError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const StepFailure& e) {
    err << "solver failure at step " << e.step() << ": " << e.what() << '\n';
    return kExitSolver;
  } catch (const SingularSystemError& e) {
    err << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  } catch (const RootFindError& e) {
    err << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  }
  return kExitValidation;
}

}  // namespace pfluid
