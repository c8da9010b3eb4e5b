#include "pfluid/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pfluid/errors.hpp"
#include "pfluid/mesh.hpp"
#include "pfluid/nfunction.hpp"
#include "pfluid/projection.hpp"

namespace pfluid {

GronwallDiagnostics gronwall_diagnostics(const TaylorHoodSpace& s, const RunResult& run, double k,
                                         const ManufacturedSolution& sol, const PDeltaParams& params,
                                         const DiagnosticConstants& constants) {
  const PeriodicMesh& mesh = s.mesh();
  const QuadratureRule& rule = s.rule();
  const int nq = rule.size();
  const int ne = s.num_elements();
  const double h = quality_report(mesh).h;
  const double q = 3.0 * params.p / (params.p + 1.0);
  const ForcingField forcing = forcing_from_solution(params, sol);
  const DivergenceProjector projector(s);
  const ErrorSeries errors = measure_errors(run, k, sol, params);

  std::vector<Patch> patches;
  patches.reserve(ne);
  for (int e = 0; e < ne; ++e) patches.push_back(patch(mesh, e));

  GronwallDiagnostics out;
  GronwallData& d = out.data;
  d.proxy = true;
  d.k = k;
  d.h = h;
  d.p = params.p;
  d.lambda = params.delta;
  d.Lambda = std::max(constants.delta0, 1.0);
  d.theta = constants.theta;
  d.gamma1 = 0.25 * characteristics(params).c0;
  d.gamma2 = constants.gamma2;
  d.gamma3 = constants.gamma3;
  d.a = errors.a;
  d.b = errors.b;

  double values[10];
  Eigen::Matrix<double, 10, 3> grads;
  std::vector<Mat> f_values(static_cast<std::size_t>(ne) * nq);
  std::vector<Mat> f_integral(ne);
  std::vector<double> volume(ne);

  for (std::size_t m = 0; m < run.states.size(); ++m) {
    const double t = run.states[m].t;
    const double t_prev = m == 0 ? t : run.states[m - 1].t;
    const FEFunction projected = projector.apply(sol.velocity_field(t));

    double grad_r = 0.0, fdist = 0.0, conj = 0.0, rem = 0.0;
    for (int e = 0; e < ne; ++e) {
      const double scale = s.weight_scale(e);
      volume[e] = 0.0;
      f_integral[e] = Mat::Zero(s.dim(), s.dim());
      for (int iq = 0; iq < nq; ++iq) {
        s.p2_basis(e, rule.barycentric[iq], values, grads);
        const VelocityAtPoint pu = evaluate_velocity(projected, e, values, grads);
        const Vec x = s.point(e, rule.barycentric[iq]);
        const double w = rule.weights[iq] * scale;
        const Vec u = sol.velocity(t, x);
        const Mat gu = sol.velocity_gradient(t, x);
        const Mat du = sym_part(gu);
        const Mat fu = f_map(params, du);

        grad_r += w * std::pow((pu.gradient - gu).norm(), q);
        fdist += w * (fu - f_map(params, sym_part(pu.gradient))).squaredNorm();
        rem += w * (pu.value - u).squaredNorm();

        const Vec rate = m == 0 ? sol.velocity_time_derivative(t, x) : Vec((u - sol.velocity(t_prev, x)) / k);
        const double drive = forcing(t, x).norm() + rate.norm() + sol.velocity(t_prev, x).norm() * gu.norm();
        conj += w * phi_shifted_conjugate(params, du.norm(), h * drive);

        f_values[static_cast<std::size_t>(e) * nq + iq] = fu;
        f_integral[e] += w * fu;
        volume[e] += w;
      }
    }

    double osc = 0.0;
    for (int e = 0; e < ne; ++e) {
      Mat mean = Mat::Zero(s.dim(), s.dim());
      double vol = 0.0;
      for (int member : patches[e].members) {
        mean += f_integral[member];
        vol += volume[member];
      }
      mean /= vol;
      for (int member : patches[e].members) {
        const double scale = s.weight_scale(member);
        for (int iq = 0; iq < nq; ++iq) {
          osc += rule.weights[iq] * scale * (f_values[static_cast<std::size_t>(member) * nq + iq] - mean).squaredNorm();
        }
      }
    }

    out.f_distance.push_back(fdist);
    out.oscillation.push_back(osc);
    out.conjugate.push_back(conj);
    out.remainder.push_back(rem / k);
    d.r.push_back(std::pow(grad_r, 1.0 / q));
    d.s.push_back(std::sqrt(fdist + osc + conj + rem / k));
  }
  d.gamma0 = std::max(measured_gamma0(d), std::numeric_limits<double>::min());
  return out;
}

}  // namespace pfluid
