#include "pfluid/config.hpp"

#include <cmath>
#include <stdexcept>

namespace pfluid {
namespace {

using Json = nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw std::invalid_argument("config field '" + field + "': " + what);
}

template <class T>
T read(const Json& j, const std::string& key) {
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    fail(key, "has the wrong type");
  }
}

template <class T>
T require(const Json& j, const std::string& key) {
  if (!j.contains(key)) fail(key, "missing");
  return read<T>(j, key);
}

template <class T>
T optional(const Json& j, const std::string& key, T fallback) {
  return j.contains(key) ? read<T>(j, key) : fallback;
}

int solution_dim(const std::string& id) { return id == "beltrami-3d" ? 3 : 2; }

}  // namespace

void ExperimentConfig::validate() const {
  if (!(p > 1.5 && p <= 2.0)) fail("p", "must lie in (3/2, 2]");
  if (!(delta0 >= 0.0) || !std::isfinite(delta0)) fail("delta0", "must be >= 0");
  if (!(delta >= 0.0 && delta <= delta0)) fail("delta", "must lie in [0, delta0]");
  if (!(mu > 0.0) || !std::isfinite(mu)) fail("mu", "must be > 0");
  if (solution != "taylor-green-2d" && solution != "beltrami-3d" && solution != "zero") {
    fail("solution", "must be taylor-green-2d, beltrami-3d or zero");
  }
  if (dim != 2 && dim != 3) fail("dim", "must be 2 or 3");
  if (solution != "zero" && dim != solution_dim(solution)) fail("dim", "does not match solution " + solution);
  if (nmesh.empty()) fail("nmesh", "needs at least one mesh size");
  for (int n : nmesh) {
    if (n < 2) fail("nmesh", "mesh sizes must be >= 2");
  }
  if (!(c3 > 0.0) || !std::isfinite(c3)) fail("c3", "must be > 0");
  if (!(T > 0.0) || !std::isfinite(T)) fail("T", "must be > 0");
  if (steps < 0) fail("steps", "must be >= 0");
  if (out.empty()) fail("out", "must not be empty");
}

Json to_json(const ExperimentConfig& c) {
  return Json{{"p", c.p},         {"delta", c.delta}, {"mu", c.mu},       {"delta0", c.delta0},
              {"dim", c.dim},     {"nmesh", c.nmesh}, {"c3", c.c3},       {"T", c.T},
              {"steps", c.steps}, {"solution", c.solution}, {"seed", c.seed}, {"out", c.out}};
}

ExperimentConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  ExperimentConfig c;
  c.p = require<double>(j, "p");
  c.delta = require<double>(j, "delta");
  c.nmesh = require<std::vector<int>>(j, "nmesh");
  c.T = require<double>(j, "T");
  c.solution = require<std::string>(j, "solution");
  c.mu = optional<double>(j, "mu", c.mu);
  c.delta0 = optional<double>(j, "delta0", c.delta0);
  c.dim = optional<int>(j, "dim", solution_dim(c.solution));
  c.c3 = optional<double>(j, "c3", c.c3);
  c.steps = optional<int>(j, "steps", c.steps);
  c.seed = optional<std::uint64_t>(j, "seed", c.seed);
  c.out = optional<std::string>(j, "out", c.out);
  return c;
}

}  // namespace pfluid
