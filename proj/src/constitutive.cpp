#include "pfluid/constitutive.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pfluid/nfunction.hpp"

namespace pfluid {

void PDeltaParams::validate() const {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw std::invalid_argument("p must satisfy p > 1 (got " + std::to_string(p) + ")");
  }
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw std::invalid_argument("delta must be >= 0 (got " + std::to_string(delta) + ")");
  }
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw std::invalid_argument("mu must be > 0 (got " + std::to_string(mu) + ")");
  }
}

Characteristics characteristics(const PDeltaParams& params) {
  return {params.mu * std::min(1.0, params.p - 1.0), params.mu * std::max(1.0, params.p - 1.0)};
}

Mat Stress4Tensor::apply(const Mat& c) const {
  Mat out = Mat::Zero(dim_, dim_);
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) {
      double v = 0.0;
      for (int k = 0; k < dim_; ++k) {
        for (int l = 0; l < dim_; ++l) v += (*this)(i, j, k, l) * c(k, l);
      }
      out(i, j) = v;
    }
  }
  return out;
}

double Stress4Tensor::contract(const Mat& e, const Mat& c) const { return dot(e, apply(c)); }

Mat stress(const PDeltaParams& params, const Mat& a) {
  const Mat d = sym_part(a);
  const double norm = d.norm();
  if (norm == 0.0) return Mat::Zero(a.rows(), a.cols());
  return params.mu * std::pow(params.delta + norm, params.p - 2.0) * d;
}

Stress4Tensor stress_jacobian(const PDeltaParams& params, const Mat& a, double floor) {
  const int dim = static_cast<int>(a.rows());
  const Mat d = sym_part(a);
  const double norm = d.norm();

  double t = norm;
  if (params.delta == 0.0 && norm < floor) {
    t = floor;
  } else if (params.delta == 0.0 && norm == 0.0) {
    throw DegenerateJacobianError("stress_jacobian: A^sym = 0 with delta = 0; regularize");
  }

  const double g = params.mu * std::pow(params.delta + t, params.p - 2.0);
  const double rank_one =
      (norm > 0.0) ? (params.p - 2.0) * t / (params.delta + t) / (norm * norm) : 0.0;

  Mat9 j = Mat9::Zero(dim * dim, dim * dim);
  for (int i = 0; i < dim; ++i) {
    for (int jj = 0; jj < dim; ++jj) {
      for (int k = 0; k < dim; ++k) {
        for (int l = 0; l < dim; ++l) {
          double isym = 0.5 * ((i == k && jj == l ? 1.0 : 0.0) + (i == l && jj == k ? 1.0 : 0.0));
          j(i * dim + jj, k * dim + l) = g * (isym + rank_one * d(i, jj) * d(k, l));
        }
      }
    }
  }
  return Stress4Tensor(dim, std::move(j));
}

Mat f_map(const PDeltaParams& params, const Mat& a) {
  const Mat d = sym_part(a);
  const double norm = d.norm();
  if (norm == 0.0) return Mat::Zero(a.rows(), a.cols());
  return std::pow(params.delta + norm, 0.5 * (params.p - 2.0)) * d;
}

NaturalDistance natural_distance_pointwise(const PDeltaParams& params, const Mat& p,
                                           const Mat& q) {
  const Mat ps = sym_part(p);
  const Mat qs = sym_part(q);
  const Mat diff = ps - qs;
  const double dist = diff.norm();
  NaturalDistance out;
  if (dist == 0.0) return out;

  out.stress_dot = dot(stress(params, ps) - stress(params, qs), diff);
  out.f_squared = (f_map(params, ps) - f_map(params, qs)).squaredNorm();
  out.shifted = phi_shifted(params, ps.norm(), dist);
  out.second_order = phi_second(params, ps.norm() + qs.norm()) * dist * dist;
  return out;
}

double equivalence_ratio(double x, double y) {
  if (x == 0.0 && y == 0.0) return 1.0;
  return x / y;
}

}  // namespace pfluid
