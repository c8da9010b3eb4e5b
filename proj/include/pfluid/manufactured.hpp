#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>

#include "pfluid/constitutive.hpp"
#include "pfluid/spaces.hpp"

namespace pfluid {

/// Smooth, 2π-periodic, solenoidal velocity with mean-free pressure, with
/// every derivative needed to synthesize the forcing.
class ManufacturedSolution {
 public:
  virtual ~ManufacturedSolution() = default;

  virtual std::string id() const = 0;
  virtual int dim() const = 0;

  virtual Vec velocity(double t, const Vec& x) const = 0;
  /// [∇u]_ij = ∂_j u_i.
  virtual Mat velocity_gradient(double t, const Vec& x) const = 0;
  virtual Vec velocity_time_derivative(double t, const Vec& x) const = 0;
  /// hessian[i](j, l) = ∂_j ∂_l u_i.
  virtual std::array<Mat, 3> velocity_hessian(double t, const Vec& x) const = 0;
  virtual double pressure(double t, const Vec& x) const = 0;
  virtual Vec pressure_gradient(double t, const Vec& x) const = 0;

  /// u(t, ·) as a field sample callback.
  VectorField velocity_field(double t) const;
};

/// u = e^{-t}(sin x cos y, -cos x sin y), π = e^{-2t}(cos 2x + cos 2y)/4.
std::unique_ptr<ManufacturedSolution> make_taylor_green_2d();
/// u = e^{-t}(sin z + cos y, sin x + cos z, sin y + cos x),
/// π = e^{-2t}(cos 2x + cos 2y + cos 2z)/4.
std::unique_ptr<ManufacturedSolution> make_beltrami_3d();
/// u = 0, π = 0.
std::unique_ptr<ManufacturedSolution> make_zero_solution(int dim);

/// Factory by id: "taylor-green-2d", "beltrami-3d", "zero" (dim required).
std::unique_ptr<ManufacturedSolution> make_solution(const std::string& id, int dim);

/// Floor on |Du| inside the chain rule for the stress divergence.
inline constexpr double kForcingJacobianFloor = 1e-14;

using ForcingField = std::function<Vec(double t, const Vec& x)>;

/// f = u_t - div S(Du) + [∇u]u + ∇π with
/// (div S(Du))_i = Σ_{j,k,l} ∂_kl S_ij(Du) ∂_j (Du)_kl.
ForcingField forcing_from_solution(const PDeltaParams& params, const ManufacturedSolution& sol);

/// The same balance evaluated pointwise; exposed for consistency checks.
Vec stress_divergence(const PDeltaParams& params, const ManufacturedSolution& sol, double t,
                      const Vec& x);

}  // namespace pfluid
