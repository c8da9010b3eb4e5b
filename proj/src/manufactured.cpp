#include "pfluid/manufactured.hpp"

#include <cmath>
#include <stdexcept>

namespace pfluid {
namespace {

class TaylorGreen2D final : public ManufacturedSolution {
 public:
  std::string id() const override { return "taylor-green-2d"; }
  int dim() const override { return 2; }

  Vec velocity(double t, const Vec& x) const override {
    const double e = std::exp(-t);
    Vec u(2);
    u << e * std::sin(x[0]) * std::cos(x[1]), -e * std::cos(x[0]) * std::sin(x[1]);
    return u;
  }
  Mat velocity_gradient(double t, const Vec& x) const override {
    const double e = std::exp(-t);
    const double sx = std::sin(x[0]), cx = std::cos(x[0]), sy = std::sin(x[1]), cy = std::cos(x[1]);
    Mat g(2, 2);
    g << e * cx * cy, -e * sx * sy, e * sx * sy, -e * cx * cy;
    return g;
  }
  Vec velocity_time_derivative(double t, const Vec& x) const override { return -velocity(t, x); }
  std::array<Mat, 3> velocity_hessian(double t, const Vec& x) const override {
    const double e = std::exp(-t);
    const double sx = std::sin(x[0]), cx = std::cos(x[0]), sy = std::sin(x[1]), cy = std::cos(x[1]);
    std::array<Mat, 3> h{Mat(2, 2), Mat(2, 2), Mat()};
    h[0] << -e * sx * cy, -e * cx * sy, -e * cx * sy, -e * sx * cy;
    h[1] << e * cx * sy, e * sx * cy, e * sx * cy, e * cx * sy;
    return h;
  }
  double pressure(double t, const Vec& x) const override {
    return 0.25 * std::exp(-2.0 * t) * (std::cos(2.0 * x[0]) + std::cos(2.0 * x[1]));
  }
  Vec pressure_gradient(double t, const Vec& x) const override {
    Vec g(2);
    g << -0.5 * std::exp(-2.0 * t) * std::sin(2.0 * x[0]), -0.5 * std::exp(-2.0 * t) * std::sin(2.0 * x[1]);
    return g;
  }
};

class Beltrami3D final : public ManufacturedSolution {
 public:
  std::string id() const override { return "beltrami-3d"; }
  int dim() const override { return 3; }

  Vec velocity(double t, const Vec& x) const override {
    const double e = std::exp(-t);
    Vec u(3);
    u << e * (std::sin(x[2]) + std::cos(x[1])), e * (std::sin(x[0]) + std::cos(x[2])),
        e * (std::sin(x[1]) + std::cos(x[0]));
    return u;
  }
  Mat velocity_gradient(double t, const Vec& x) const override {
    const double e = std::exp(-t);
    Mat g = Mat::Zero(3, 3);
    g(0, 1) = -e * std::sin(x[1]);
    g(0, 2) = e * std::cos(x[2]);
    g(1, 0) = e * std::cos(x[0]);
    g(1, 2) = -e * std::sin(x[2]);
    g(2, 0) = -e * std::sin(x[0]);
    g(2, 1) = e * std::cos(x[1]);
    return g;
  }
  Vec velocity_time_derivative(double t, const Vec& x) const override { return -velocity(t, x); }
  std::array<Mat, 3> velocity_hessian(double t, const Vec& x) const override {
    const double e = std::exp(-t);
    std::array<Mat, 3> h{Mat::Zero(3, 3), Mat::Zero(3, 3), Mat::Zero(3, 3)};
    h[0](1, 1) = -e * std::cos(x[1]);
    h[0](2, 2) = -e * std::sin(x[2]);
    h[1](0, 0) = -e * std::sin(x[0]);
    h[1](2, 2) = -e * std::cos(x[2]);
    h[2](0, 0) = -e * std::cos(x[0]);
    h[2](1, 1) = -e * std::sin(x[1]);
    return h;
  }
  double pressure(double t, const Vec& x) const override {
    return 0.25 * std::exp(-2.0 * t) *
           (std::cos(2.0 * x[0]) + std::cos(2.0 * x[1]) + std::cos(2.0 * x[2]));
  }
  Vec pressure_gradient(double t, const Vec& x) const override {
    const double e = -0.5 * std::exp(-2.0 * t);
    Vec g(3);
    g << e * std::sin(2.0 * x[0]), e * std::sin(2.0 * x[1]), e * std::sin(2.0 * x[2]);
    return g;
  }
};

class ZeroSolution final : public ManufacturedSolution {
 public:
  explicit ZeroSolution(int dim) : dim_(dim) {}
  std::string id() const override { return "zero"; }
  int dim() const override { return dim_; }
  Vec velocity(double, const Vec&) const override { return Vec::Zero(dim_); }
  Mat velocity_gradient(double, const Vec&) const override { return Mat::Zero(dim_, dim_); }
  Vec velocity_time_derivative(double, const Vec&) const override { return Vec::Zero(dim_); }
  std::array<Mat, 3> velocity_hessian(double, const Vec&) const override {
    return {Mat::Zero(dim_, dim_), Mat::Zero(dim_, dim_), Mat::Zero(dim_, dim_)};
  }
  double pressure(double, const Vec&) const override { return 0.0; }
  Vec pressure_gradient(double, const Vec&) const override { return Vec::Zero(dim_); }

 private:
  int dim_;
};

}  // namespace

VectorField ManufacturedSolution::velocity_field(double t) const {
  return [this, t](const Vec& x) { return FieldSample{velocity(t, x), velocity_gradient(t, x)}; };
}

std::unique_ptr<ManufacturedSolution> make_taylor_green_2d() { return std::make_unique<TaylorGreen2D>(); }
std::unique_ptr<ManufacturedSolution> make_beltrami_3d() { return std::make_unique<Beltrami3D>(); }
std::unique_ptr<ManufacturedSolution> make_zero_solution(int dim) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("zero solution: dim must be 2 or 3");
  return std::make_unique<ZeroSolution>(dim);
}

std::unique_ptr<ManufacturedSolution> make_solution(const std::string& id, int dim) {
  if (id == "taylor-green-2d") return make_taylor_green_2d();
  if (id == "beltrami-3d") return make_beltrami_3d();
  if (id == "zero") return make_zero_solution(dim);
  throw std::invalid_argument("unknown solution id '" + id +
                              "' (expected taylor-green-2d, beltrami-3d or zero)");
}

Vec stress_divergence(const PDeltaParams& params, const ManufacturedSolution& sol, double t,
                      const Vec& x) {
  const int d = sol.dim();
  const Mat grad = sol.velocity_gradient(t, x);
  const std::array<Mat, 3> hess = sol.velocity_hessian(t, x);
  const Stress4Tensor ds = stress_jacobian(params, grad, kForcingJacobianFloor);
  Vec out = Vec::Zero(d);
  for (int j = 0; j < d; ++j) {
    // ∂_j (Du)_kl = ½(∂_j ∂_l u_k + ∂_j ∂_k u_l).
    Mat djd(d, d);
    for (int k = 0; k < d; ++k) {
      for (int l = 0; l < d; ++l) djd(k, l) = 0.5 * (hess[k](j, l) + hess[l](j, k));
    }
    const Mat contrib = ds.apply(djd);
    for (int i = 0; i < d; ++i) out[i] += contrib(i, j);
  }
  return out;
}

ForcingField forcing_from_solution(const PDeltaParams& params, const ManufacturedSolution& sol) {
  return [params, &sol](double t, const Vec& x) {
    const Vec u = sol.velocity(t, x);
    const Mat grad = sol.velocity_gradient(t, x);
    return Vec(sol.velocity_time_derivative(t, x) - stress_divergence(params, sol, t, x) + grad * u +
               sol.pressure_gradient(t, x));
  };
}

}  // namespace pfluid
