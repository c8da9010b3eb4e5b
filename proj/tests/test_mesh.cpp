#include <cmath>
#include <set>
#include <sstream>

#include "doctest.h"
#include "pfluid/mesh.hpp"

using namespace pfluid;

TEST_CASE("construction counts") {
  const PeriodicMesh m = build_structured(2, 2);
  CHECK(m.num_simplices() == 8);
  CHECK(m.num_vertices() == 4);
  const PeriodicMesh m3 = build_structured(3, 3);
  CHECK(m3.num_simplices() == 27 * 6);
  CHECK(m3.num_vertices() == 27);
  CHECK_THROWS_AS(build_structured(2, 1), std::invalid_argument);
  CHECK_THROWS_AS(build_structured(4, 4), std::invalid_argument);
}

TEST_CASE("volume partition of the torus") {
  for (int dim : {2, 3}) {
    for (int n : {2, 3, 5, 8}) {
      const PeriodicMesh m = build_structured(dim, n);
      double total = 0.0;
      for (int k = 0; k < m.num_simplices(); ++k) total += m.volume(k);
      CHECK(total == doctest::Approx(std::pow(kTwoPi, dim)).epsilon(1e-12));
    }
  }
}

TEST_CASE("quality metrics are refinement invariant") {
  for (int dim : {2, 3}) {
    const QualityReport r4 = quality_report(build_structured(dim, 4));
    for (int n : {8, 16, 32}) {
      if (dim == 3 && n > 16) continue;
      const QualityReport r = quality_report(build_structured(dim, n));
      CHECK(r.gamma0 == doctest::Approx(r4.gamma0).epsilon(1e-12));
      CHECK(r.h * n == doctest::Approx(r4.h * 4).epsilon(1e-12));
    }
  }
  const QualityReport r = quality_report(build_structured(2, 4));
  CHECK(r.h == doctest::Approx(kTwoPi / 4.0 * std::sqrt(2.0)).epsilon(1e-14));
  // Right isosceles triangle with legs s: inball diameter (2 - √2) s.
  CHECK(r.min_rho == doctest::Approx((2.0 - std::sqrt(2.0)) * kTwoPi / 4.0).epsilon(1e-12));
}

TEST_CASE("every facet is shared by exactly two simplices") {
  for (int dim : {2, 3}) {
    for (int n : {2, 3, 4}) {
      const PeriodicMesh m = build_structured(dim, n);
      const auto count = facet_multiplicity(m);
      int bad = 0;
      for (const auto& [key, c] : count) bad += (c != 2);
      CHECK(bad == 0);
      CHECK(count.size() * 2 == static_cast<std::size_t>(m.num_simplices() * (dim + 1)));
    }
  }
}

TEST_CASE("patches") {
  const PeriodicMesh m8 = build_structured(2, 8);
  const PeriodicMesh m16 = build_structured(2, 16);
  const Patch p8 = patch(m8, 37);
  const Patch p16 = patch(m16, 201);
  CHECK(p8.members.size() == p16.members.size());
  CHECK(std::binary_search(p8.members.begin(), p8.members.end(), 37));
  CHECK_THROWS_AS(patch(m8, -1), std::out_of_range);

  // Uniform cardinality for every simplex: Σ|S_K| / Σ|K| equals it.
  std::set<std::size_t> sizes;
  double patch_volume = 0.0, volume = 0.0;
  for (int k = 0; k < m8.num_simplices(); ++k) {
    const Patch p = patch(m8, k);
    sizes.insert(p.members.size());
    patch_volume += p.volume;
    volume += m8.volume(k);
  }
  CHECK(sizes.size() == 1);
  CHECK(patch_volume / volume == doctest::Approx(static_cast<double>(*sizes.begin())));
}

TEST_CASE("mesh dump") {
  const PeriodicMesh m = build_structured(2, 2);
  std::ostringstream out;
  write_mesh(m, out);
  int v = 0, s = 0;
  std::istringstream in(out.str());
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("v ", 0) == 0) ++v;
    if (line.rfind("s ", 0) == 0) ++s;
  }
  CHECK(v == 4);
  CHECK(s == 8);
}
