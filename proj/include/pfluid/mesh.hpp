#pragma once

#include <array>
#include <map>
#include <ostream>
#include <vector>

#include "pfluid/tensor.hpp"

namespace pfluid {

using Lattice = std::array<int, 3>;

/// Key identifying a sub-simplex (edge, facet, ...) of the torus up to
/// periodic translation: the lexicographically smallest lattice vertex,
/// wrapped into [0, n)^d, followed by the offsets of the remaining vertices.
using EntityKey = std::vector<int>;

/// Conformal simplicial triangulation of the torus (0, 2π)^d obtained by
/// Kuhn (Freudenthal) subdivision of a uniform n^d grid. Periodicity is
/// realized by vertex identification; each simplex also keeps its unwrapped
/// vertex coordinates so that geometry is evaluated on the covering space.
class PeriodicMesh {
 public:
  int dim() const { return dim_; }
  int subdivisions() const { return n_; }
  double period() const { return kTwoPi; }

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_simplices() const { return static_cast<int>(simplices_.size()); }
  int vertices_per_simplex() const { return dim_ + 1; }

  /// Wrapped vertex coordinates in [0, 2π)^d.
  const Vec& vertex(int v) const { return vertices_[v]; }
  /// Global vertex id of local vertex i of simplex K.
  int simplex_vertex(int k, int i) const { return simplices_[k][i]; }
  /// Unwrapped coordinates of local vertex i of simplex K.
  Vec simplex_point(int k, int i) const;
  /// Unwrapped lattice coordinates of local vertex i of simplex K.
  const Lattice& simplex_lattice(int k, int i) const { return lattice_[k][i]; }

  double diameter(int k) const { return diameter_[k]; }
  /// Diameter of the inscribed ball (twice the inradius).
  double inball_diameter(int k) const { return inball_[k]; }
  double volume(int k) const { return volume_[k]; }

  /// Simplices having v as a vertex.
  const std::vector<int>& vertex_simplices(int v) const { return vertex_simplices_[v]; }

  /// Canonical periodic key of the sub-simplex of K spanned by the given
  /// local vertices.
  EntityKey entity_key(int k, const std::vector<int>& local_vertices) const;

 private:
  friend PeriodicMesh build_structured(int dim, int n);

  int dim_ = 0;
  int n_ = 0;
  std::vector<Vec> vertices_;
  std::vector<std::array<int, 4>> simplices_;
  std::vector<std::array<Lattice, 4>> lattice_;
  std::vector<double> diameter_;
  std::vector<double> inball_;
  std::vector<double> volume_;
  std::vector<std::vector<int>> vertex_simplices_;
};

/// Uniform n^d grid of (0, 2π)^d, each cell split into d! Kuhn simplices.
/// Throws std::invalid_argument for dim not in {2, 3} or n < 2.
PeriodicMesh build_structured(int dim, int n);

/// Neighbourhood S_K: all simplices sharing at least one vertex with K.
struct Patch {
  int simplex = 0;
  std::vector<int> members;  // sorted, contains `simplex`
  double volume = 0.0;
};

Patch patch(const PeriodicMesh& mesh, int k);

struct QualityReport {
  double h = 0.0;       // max_K h_K
  double gamma0 = 0.0;  // max_K h_K / rho_K
  double min_rho = 0.0;
};

QualityReport quality_report(const PeriodicMesh& mesh);

/// Number of simplices sharing each facet, keyed periodically.
std::map<EntityKey, int> facet_multiplicity(const PeriodicMesh& mesh);

/// Text dump: header line, one line per vertex (coordinates), one line per
/// simplex (vertex ids).
void write_mesh(const PeriodicMesh& mesh, std::ostream& out);

}  // namespace pfluid
