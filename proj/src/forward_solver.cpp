#include "subfrac/forward_solver.hpp"

#include <cmath>
#include <cstring>
#include <sstream>
#include <stdexcept>

#include "galerkin_stepper.hpp"
#include "subfrac/errors.hpp"

namespace subfrac {

namespace {

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t n) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t hash_double(std::uint64_t h, double v) {
  return fnv1a(h, &v, sizeof(v));
}

// Contraction condition for the lagged reaction term.
void check_step_size(const ProblemSpec& spec) {
  const double a = spec.alpha.alpha();
  const double q = std::pow(spec.time_grid.dt(), a) * spec.ell0 * std::tgamma(2.0 - a);
  if (q >= 1.0) {
    std::ostringstream os;
    os << "time step too large for the reaction fixed point: tau^alpha * ell0 * "
          "Gamma(2-alpha) = " << q << " >= 1; refine M";
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

std::uint64_t spec_fingerprint(const ProblemSpec& spec) {
  std::uint64_t h = 1469598103934665603ULL;
  h = hash_double(h, spec.alpha.alpha());
  h = hash_double(h, spec.T);
  h = hash_double(h, (double)spec.time_grid.steps());
  h = hash_double(h, (double)spec.x_grid.cells());
  h = hash_double(h, (double)spec.basis.modes());
  h = hash_double(h, spec.ell0);
  h = hash_double(h, spec.f_M);
  h = hash_double(h, spec.tol.fp_tol);
  h = hash_double(h, spec.tol.recon_tol);
  h = hash_double(h, spec.tol.denom_floor);
  return h;
}

SpectralState project_initial(const ProblemSpec& spec) {
  return detail::GalerkinStepper(spec).initial_state();
}

SpectralState forward_step(std::span<const SpectralState> history,
                           std::span<const double> h_slice, const ProblemSpec& spec,
                           int* iterations) {
  detail::GalerkinStepper stepper(spec);
  auto res = stepper.step_known_h(history, h_slice);
  if (iterations) *iterations = res.iterations;
  return std::move(res.state);
}

Trajectory solve_forward(const ProblemSpec& spec, const Matrix& h_field) {
  if (h_field.rows() != spec.time_grid.points() || h_field.cols() != spec.x_grid.points()) {
    throw std::invalid_argument("solve_forward: h_field shape does not match the grids");
  }
  for (double v : h_field.data()) {
    if (!std::isfinite(v)) throw std::invalid_argument("solve_forward: h_field has non-finite entries");
  }
  check_step_size(spec);

  detail::GalerkinStepper stepper(spec);
  const std::size_t M = spec.time_grid.steps();
  Trajectory traj;
  traj.spec_fingerprint = spec_fingerprint(spec);
  traj.settings = SolverSettings{spec.tol.fp_tol, spec.tol.fp_max};
  traj.states.reserve(M + 1);
  traj.states.push_back(stepper.initial_state());

  const std::vector<double> b = l1_weights(M, spec.alpha.alpha());
  const double beta = l1_scale(spec.time_grid.dt(), spec.alpha.alpha());
  std::vector<double> norms_sq;
  norms_sq.reserve(M + 1);
  norms_sq.push_back(stepper.l2D_sq(traj.states[0]));

  for (std::size_t m = 1; m <= M; ++m) {
    auto res = stepper.step_known_h(traj.states, h_field.row(m));
    traj.states.push_back(std::move(res.state));
    traj.fp_iterations.push_back(res.iterations);
    norms_sq.push_back(stepper.l2D_sq(traj.states.back()));
    double dnorm = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      dnorm += b[j] * (norms_sq[m - j] - norms_sq[m - j - 1]);
    }
    traj.energy.push_back(EnergyRecord{0.5 * dnorm / beta + res.grad_sq + res.uy_sq,
                                       res.source_dot_u});
  }
  return traj;
}

double state_norm_sq(const SpectralState& state, const ProblemSpec& spec) {
  return detail::GalerkinStepper(spec).l2D_sq(state);
}

double state_error_vs(const SpectralState& state, const ProblemSpec& spec, double t,
                      const std::function<double(double, double, double)>& u_ref) {
  double err = 0.0, ref = 0.0;
  const std::size_t nq = spec.quad.size();
  std::vector<double> coeffs(spec.basis.modes());
  for (std::size_t i = 0; i < spec.x_grid.points(); ++i) {
    const double x = spec.x_grid.node(i);
    const double wx = (i == 0 || i + 1 == spec.x_grid.points()) ? 0.5 * spec.x_grid.dx()
                                                                : spec.x_grid.dx();
    for (std::size_t k = 0; k < coeffs.size(); ++k) coeffs[k] = state.coeffs(k, i);
    const std::vector<double> u_h = reconstruct_y(coeffs, spec.basis, spec.quad.nodes());
    for (std::size_t q = 0; q < nq; ++q) {
      const double w = wx * spec.quad.weight(q);
      const double ue = u_ref(t, x, spec.quad.node(q));
      const double d = u_h[q] - ue;
      err += w * d * d;
      ref += w * ue * ue;
    }
  }
  return ref > 0.0 ? std::sqrt(err / ref) : std::sqrt(err);
}

}  // namespace subfrac
