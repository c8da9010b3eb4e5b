#include "pfluid/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace pfluid {
namespace {

int wrap(int i, int n) { return ((i % n) + n) % n; }

double factorial(int d) {
  double f = 1.0;
  for (int i = 2; i <= d; ++i) f *= i;
  return f;
}

// |K| from the determinant of the edge vectors.
double simplex_volume(const std::vector<Vec>& pts, int dim) {
  Mat j(dim, dim);
  for (int c = 0; c < dim; ++c) j.col(c) = pts[c + 1] - pts[0];
  return std::abs(j.determinant()) / factorial(dim);
}

double facet_measure(const std::vector<Vec>& pts, int dim) {
  // pts holds dim vertices spanning a (dim-1)-simplex.
  if (dim == 2) return (pts[1] - pts[0]).norm();
  Eigen::Vector3d a = pts[1] - pts[0];
  Eigen::Vector3d b = pts[2] - pts[0];
  return 0.5 * a.cross(b).norm();
}

}  // namespace

Vec PeriodicMesh::simplex_point(int k, int i) const {
  const double hx = kTwoPi / n_;
  Vec x(dim_);
  for (int c = 0; c < dim_; ++c) x[c] = hx * lattice_[k][i][c];
  return x;
}

EntityKey PeriodicMesh::entity_key(int k, const std::vector<int>& local_vertices) const {
  std::vector<Lattice> pts;
  pts.reserve(local_vertices.size());
  for (int i : local_vertices) pts.push_back(lattice_[k][i]);
  std::sort(pts.begin(), pts.end());
  EntityKey key;
  key.reserve(pts.size() * dim_);
  for (int c = 0; c < dim_; ++c) key.push_back(wrap(pts[0][c], n_));
  for (std::size_t v = 1; v < pts.size(); ++v) {
    for (int c = 0; c < dim_; ++c) key.push_back(pts[v][c] - pts[0][c]);
  }
  return key;
}

PeriodicMesh build_structured(int dim, int n) {
  if (dim != 2 && dim != 3) {
    throw std::invalid_argument("build_structured: dim must be 2 or 3 (got " +
                                std::to_string(dim) + ")");
  }
  if (n < 2) {
    throw std::invalid_argument("build_structured: n must be >= 2 (got " + std::to_string(n) +
                                ")");
  }

  PeriodicMesh mesh;
  mesh.dim_ = dim;
  mesh.n_ = n;
  const double hx = kTwoPi / n;
  const int nz = (dim == 3) ? n : 1;

  auto vertex_id = [n, dim](const Lattice& l) {
    int id = wrap(l[0], n) + n * wrap(l[1], n);
    if (dim == 3) id += n * n * wrap(l[2], n);
    return id;
  };

  const int nv = n * n * nz;
  mesh.vertices_.resize(nv);
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        Lattice l{i, j, k};
        Vec x(dim);
        x[0] = hx * i;
        x[1] = hx * j;
        if (dim == 3) x[2] = hx * k;
        mesh.vertices_[vertex_id(l)] = x;
      }
    }
  }

  std::vector<int> perm(dim);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> perms;
  do {
    perms.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));

  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        for (const auto& sigma : perms) {
          std::array<Lattice, 4> pts{};
          pts[0] = {i, j, k};
          for (int s = 0; s < dim; ++s) {
            pts[s + 1] = pts[s];
            pts[s + 1][sigma[s]] += 1;
          }
          std::array<int, 4> ids{-1, -1, -1, -1};
          for (int s = 0; s <= dim; ++s) ids[s] = vertex_id(pts[s]);
          mesh.simplices_.push_back(ids);
          mesh.lattice_.push_back(pts);
        }
      }
    }
  }

  const int ns = mesh.num_simplices();
  mesh.diameter_.resize(ns);
  mesh.inball_.resize(ns);
  mesh.volume_.resize(ns);
  mesh.vertex_simplices_.assign(nv, {});
  for (int s = 0; s < ns; ++s) {
    std::vector<Vec> pts;
    for (int i = 0; i <= dim; ++i) pts.push_back(mesh.simplex_point(s, i));
    double diam = 0.0;
    for (int a = 0; a <= dim; ++a) {
      for (int b = a + 1; b <= dim; ++b) diam = std::max(diam, (pts[a] - pts[b]).norm());
    }
    const double vol = simplex_volume(pts, dim);
    double surface = 0.0;
    for (int skip = 0; skip <= dim; ++skip) {
      std::vector<Vec> facet;
      for (int i = 0; i <= dim; ++i) {
        if (i != skip) facet.push_back(pts[i]);
      }
      surface += facet_measure(facet, dim);
    }
    mesh.diameter_[s] = diam;
    mesh.volume_[s] = vol;
    mesh.inball_[s] = 2.0 * dim * vol / surface;
    for (int i = 0; i <= dim; ++i) mesh.vertex_simplices_[mesh.simplices_[s][i]].push_back(s);
  }
  return mesh;
}

Patch patch(const PeriodicMesh& mesh, int k) {
  if (k < 0 || k >= mesh.num_simplices()) {
    throw std::out_of_range("patch: invalid simplex id " + std::to_string(k));
  }
  Patch out;
  out.simplex = k;
  for (int i = 0; i < mesh.vertices_per_simplex(); ++i) {
    const auto& around = mesh.vertex_simplices(mesh.simplex_vertex(k, i));
    out.members.insert(out.members.end(), around.begin(), around.end());
  }
  std::sort(out.members.begin(), out.members.end());
  out.members.erase(std::unique(out.members.begin(), out.members.end()), out.members.end());
  for (int m : out.members) out.volume += mesh.volume(m);
  return out;
}

QualityReport quality_report(const PeriodicMesh& mesh) {
  QualityReport r;
  r.min_rho = std::numeric_limits<double>::infinity();
  for (int k = 0; k < mesh.num_simplices(); ++k) {
    r.h = std::max(r.h, mesh.diameter(k));
    r.gamma0 = std::max(r.gamma0, mesh.diameter(k) / mesh.inball_diameter(k));
    r.min_rho = std::min(r.min_rho, mesh.inball_diameter(k));
  }
  return r;
}

std::map<EntityKey, int> facet_multiplicity(const PeriodicMesh& mesh) {
  std::map<EntityKey, int> count;
  const int nv = mesh.vertices_per_simplex();
  for (int k = 0; k < mesh.num_simplices(); ++k) {
    for (int skip = 0; skip < nv; ++skip) {
      std::vector<int> local;
      for (int i = 0; i < nv; ++i) {
        if (i != skip) local.push_back(i);
      }
      ++count[mesh.entity_key(k, local)];
    }
  }
  return count;
}

void write_mesh(const PeriodicMesh& mesh, std::ostream& out) {
  out << "# periodic mesh dim=" << mesh.dim() << " n=" << mesh.subdivisions()
      << " vertices=" << mesh.num_vertices() << " simplices=" << mesh.num_simplices() << '\n';
  out.precision(17);
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    out << 'v';
    for (int c = 0; c < mesh.dim(); ++c) out << ' ' << mesh.vertex(v)[c];
    out << '\n';
  }
  for (int k = 0; k < mesh.num_simplices(); ++k) {
    out << 's';
    for (int i = 0; i < mesh.vertices_per_simplex(); ++i) out << ' ' << mesh.simplex_vertex(k, i);
    out << '\n';
  }
}

}  // namespace pfluid
