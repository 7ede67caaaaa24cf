#include "galerkin_stepper.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "subfrac/errors.hpp"
#include "subfrac/parallel.hpp"

namespace subfrac::detail {

GalerkinStepper::GalerkinStepper(const ProblemSpec& spec)
    : spec_(spec),
      n_modes_(spec.basis.modes()),
      nxp_(spec.x_grid.points()),
      nq_(spec.quad.size()),
      beta_(l1_scale(spec.time_grid.dt(), spec.alpha.alpha())),
      fp_stop_(spec.tol.fp_tol / 8.0),
      b_(l1_weights(spec.time_grid.steps(), spec.alpha.alpha())),
      psi_(spec.basis.modes(), spec.quad.size()) {
  const double dx = spec.x_grid.dx();
  xw_.assign(nxp_, dx);
  xw_.front() = 0.5 * dx;
  xw_.back() = 0.5 * dx;

  omega_s_.resize(nq_);
  omega_p_.resize(nq_);
  for (std::size_t q = 0; q < nq_; ++q) {
    omega_s_[q] = spec.omega(spec.quad.node(q));
    omega_p_[q] = spec.omega_prime(spec.quad.node(q));
  }
  for (std::size_t k = 1; k <= n_modes_; ++k) {
    for (std::size_t q = 0; q < nq_; ++q) {
      psi_(k - 1, q) = spec.basis.eval(k, spec.quad.node(q));
    }
  }
  dpsi_omega_.assign(n_modes_, 0.0);
  psi_omega_.assign(n_modes_, 0.0);
  for (std::size_t k = 1; k <= n_modes_; ++k) {
    double dp = 0.0, p = 0.0;
    for (std::size_t q = 0; q < nq_; ++q) {
      const double w = spec.quad.weight(q);
      dp += w * spec.basis.deriv(k, spec.quad.node(q)) * omega_p_[q];
      p += w * psi_(k - 1, q) * omega_s_[q];
    }
    dpsi_omega_[k - 1] = dp;
    psi_omega_[k - 1] = p;
  }
}

SpectralState GalerkinStepper::initial_state() const {
  SpectralState s{Matrix(n_modes_, nxp_)};
  std::vector<double> phi_s(nq_);
  for (std::size_t i = 1; i + 1 < nxp_; ++i) {
    const double x = spec_.x_grid.node(i);
    for (std::size_t q = 0; q < nq_; ++q) phi_s[q] = spec_.phi(x, spec_.quad.node(q));
    const std::vector<double> c = project_y(phi_s, spec_.basis, spec_.quad);
    for (std::size_t k = 0; k < n_modes_; ++k) s.coeffs(k, i) = c[k];
  }
  return s;
}

void GalerkinStepper::sample_f(std::size_t m, Matrix& f_k, std::vector<double>& f_omega) const {
  const double t = spec_.time_grid.node(m);
  f_k = Matrix(n_modes_, nxp_);
  f_omega.assign(nxp_, 0.0);
  std::vector<double> f_s(nq_);
  for (std::size_t i = 0; i < nxp_; ++i) {
    const double x = spec_.x_grid.node(i);
    for (std::size_t q = 0; q < nq_; ++q) f_s[q] = spec_.f(t, x, spec_.quad.node(q));
    double fo = 0.0;
    for (std::size_t q = 0; q < nq_; ++q) fo += spec_.quad.weight(q) * f_s[q] * omega_s_[q];
    f_omega[i] = fo;
    for (std::size_t k = 0; k < n_modes_; ++k) {
      double acc = 0.0;
      for (std::size_t q = 0; q < nq_; ++q) {
        acc += spec_.quad.weight(q) * f_s[q] * psi_(k, q);
      }
      f_k(k, i) = acc;
    }
  }
}

void GalerkinStepper::sample_g(double t, const SpectralState& u, Matrix& g_quad) const {
  parallel_for(nxp_, [&](std::size_t i) {
    const double x = spec_.x_grid.node(i);
    for (std::size_t q = 0; q < nq_; ++q) {
      double uv = 0.0;
      for (std::size_t k = 0; k < n_modes_; ++k) uv += u.coeffs(k, i) * psi_(k, q);
      g_quad(i, q) = spec_.g(t, x, spec_.quad.node(q), uv);
    }
  });
}

void GalerkinStepper::project_g(const Matrix& g_quad, Matrix& g_k,
                                std::vector<double>& g_omega) const {
  for (std::size_t i = 0; i < nxp_; ++i) {
    double go = 0.0;
    for (std::size_t q = 0; q < nq_; ++q) {
      go += spec_.quad.weight(q) * g_quad(i, q) * omega_s_[q];
    }
    g_omega[i] = go;
    for (std::size_t k = 0; k < n_modes_; ++k) {
      double acc = 0.0;
      for (std::size_t q = 0; q < nq_; ++q) {
        acc += spec_.quad.weight(q) * g_quad(i, q) * psi_(k, q);
      }
      g_k(k, i) = acc;
    }
  }
}

Matrix GalerkinStepper::history_sum(std::span<const SpectralState> history) const {
  const std::size_t m = history.size();
  Matrix hist(n_modes_, nxp_);
  // sum_{j=1}^{m-1} (b_{j-1} - b_j) c^{m-j} + b_{m-1} c^0
  for (std::size_t j = 1; j < m; ++j) {
    const double w = b_[j - 1] - b_[j];
    const auto& c = history[m - j].coeffs;
    for (std::size_t k = 0; k < n_modes_; ++k) {
      for (std::size_t i = 0; i < nxp_; ++i) hist(k, i) += w * c(k, i);
    }
  }
  const double w0 = b_[m - 1];
  for (std::size_t k = 0; k < n_modes_; ++k) {
    for (std::size_t i = 0; i < nxp_; ++i) hist(k, i) += w0 * history[0].coeffs(k, i);
  }
  return hist;
}

SpectralState GalerkinStepper::solve_modes(const Matrix& hist, const Matrix& source) const {
  SpectralState out{Matrix(n_modes_, nxp_)};
  const double dx = spec_.x_grid.dx();
  const double off = -1.0 / (dx * dx);
  const std::size_t n_int = nxp_ - 2;
  parallel_for(n_modes_, [&](std::size_t k) {
    const double kk = (double)((k + 1) * (k + 1));
    const double diag = 1.0 / beta_ + kk + 2.0 / (dx * dx);
    std::vector<double> cp(n_int), dp(n_int);
    // Thomas elimination on the constant-coefficient tridiagonal system.
    double denom = diag;
    cp[0] = off / denom;
    dp[0] = (hist(k, 1) / beta_ + source(k, 1)) / denom;
    for (std::size_t i = 1; i < n_int; ++i) {
      denom = diag - off * cp[i - 1];
      cp[i] = off / denom;
      const double rhs = hist(k, i + 1) / beta_ + source(k, i + 1);
      dp[i] = (rhs - off * dp[i - 1]) / denom;
    }
    out.coeffs(k, n_int) = dp[n_int - 1];
    for (std::size_t i = n_int - 1; i >= 1; --i) {
      out.coeffs(k, i) = dp[i - 1] - cp[i - 1] * out.coeffs(k, i + 1);
    }
    out.coeffs(k, 0) = 0.0;
    out.coeffs(k, nxp_ - 1) = 0.0;
  });
  return out;
}

void GalerkinStepper::check_finite(const SpectralState& s, double t) const {
  for (double v : s.coeffs.data()) {
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "solver state blew up at t = " << t;
      throw BlowUpError(os.str());
    }
  }
}

double GalerkinStepper::l2D_sq(const SpectralState& s) const {
  double acc = 0.0;
  for (std::size_t k = 0; k < n_modes_; ++k) {
    for (std::size_t i = 0; i < nxp_; ++i) {
      const double c = s.coeffs(k, i);
      acc += xw_[i] * c * c;
    }
  }
  return acc;
}

double GalerkinStepper::l2D_diff_norm(const SpectralState& a, const SpectralState& b) const {
  double acc = 0.0;
  for (std::size_t k = 0; k < n_modes_; ++k) {
    for (std::size_t i = 0; i < nxp_; ++i) {
      const double d = a.coeffs(k, i) - b.coeffs(k, i);
      acc += xw_[i] * d * d;
    }
  }
  return std::sqrt(acc);
}

double GalerkinStepper::l2G_diff_norm(std::span<const double> a, std::span<const double> b) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < nxp_; ++i) {
    const double d = a[i] - b[i];
    acc += xw_[i] * d * d;
  }
  return std::sqrt(acc);
}

double GalerkinStepper::l2G_sq(std::span<const double> v) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < nxp_; ++i) acc += xw_[i] * v[i] * v[i];
  return acc;
}

double GalerkinStepper::grad_sq(const SpectralState& s) const {
  const double dx = spec_.x_grid.dx();
  double acc = 0.0;
  for (std::size_t k = 0; k < n_modes_; ++k) {
    for (std::size_t i = 0; i + 1 < nxp_; ++i) {
      const double d = s.coeffs(k, i + 1) - s.coeffs(k, i);
      acc += d * d / dx;
    }
  }
  return acc;
}

double GalerkinStepper::uy_sq(const SpectralState& s) const {
  double acc = 0.0;
  for (std::size_t k = 0; k < n_modes_; ++k) {
    const double kk = (double)((k + 1) * (k + 1));
    for (std::size_t i = 0; i < nxp_; ++i) {
      const double c = s.coeffs(k, i);
      acc += kk * xw_[i] * c * c;
    }
  }
  return acc;
}

double GalerkinStepper::measurement_projection(const SpectralState& s, std::size_t i) const {
  double acc = 0.0;
  for (std::size_t k = 0; k < n_modes_; ++k) acc += s.coeffs(k, i) * psi_omega_[k];
  return acc;
}

std::vector<double> GalerkinStepper::h_slice(const SpectralState& state,
                                             std::span<const double> g_omega,
                                             std::span<const double> f_omega,
                                             const MeasurementData& md, std::size_t m,
                                             double* denom_min_out) const {
  std::vector<double> h(nxp_, 0.0);
  double denom_min = std::numeric_limits<double>::max();
  for (std::size_t i = 0; i < nxp_; ++i) {
    const double denom = f_omega[i];
    const double ad = std::abs(denom);
    denom_min = std::min(denom_min, ad);
    if (ad < spec_.tol.denom_floor) {
      std::ostringstream os;
      os << "degenerate source denominator |(f, omega)| = " << ad << " at (t = "
         << spec_.time_grid.node(m) << ", x = " << spec_.x_grid.node(i) << ")";
      throw DegenerateSourceError(os.str());
    }
    double uy_term = 0.0;
    for (std::size_t k = 0; k < n_modes_; ++k) {
      uy_term += state.coeffs(k, i) * dpsi_omega_[k];
    }
    const double g_term = g_omega.empty() ? 0.0 : g_omega[i];
    h[i] = (md.dalpha_H(m, i) - md.laplace_H(m, i) - g_term + uy_term) / denom;
  }
  if (denom_min_out) *denom_min_out = denom_min;
  return h;
}

std::vector<double> GalerkinStepper::h_from_state(const SpectralState& state,
                                                  const MeasurementData& md, std::size_t m,
                                                  double* denom_min_out) const {
  Matrix f_k;
  std::vector<double> f_omega;
  sample_f(m, f_k, f_omega);
  std::vector<double> g_omega;
  if (!spec_.g_zero) {
    Matrix g_quad(nxp_, nq_);
    sample_g(spec_.time_grid.node(m), state, g_quad);
    Matrix g_k(n_modes_, nxp_);
    g_omega.assign(nxp_, 0.0);
    project_g(g_quad, g_k, g_omega);
  }
  return h_slice(state, g_omega, f_omega, md, m, denom_min_out);
}

GalerkinStepper::StepResult GalerkinStepper::step_known_h(
    std::span<const SpectralState> history, std::span<const double> h_slice) const {
  const std::size_t m = history.size();
  const double t = spec_.time_grid.node(m);
  const Matrix hist = history_sum(history);
  Matrix f_k;
  std::vector<double> f_omega;
  sample_f(m, f_k, f_omega);

  Matrix source(n_modes_, nxp_);
  Matrix g_quad(spec_.g_zero ? 0 : nxp_, spec_.g_zero ? 0 : nq_);
  Matrix g_k(n_modes_, nxp_);
  std::vector<double> g_omega(nxp_, 0.0);

  StepResult res;
  SpectralState iterate = history.back();
  for (int s = 1; s <= spec_.tol.fp_max; ++s) {
    if (!spec_.g_zero) {
      sample_g(t, iterate, g_quad);
      project_g(g_quad, g_k, g_omega);
    }
    for (std::size_t k = 0; k < n_modes_; ++k) {
      for (std::size_t i = 0; i < nxp_; ++i) {
        source(k, i) = (spec_.g_zero ? 0.0 : g_k(k, i)) + f_k(k, i) * h_slice[i];
      }
    }
    SpectralState next = solve_modes(hist, source);
    check_finite(next, t);
    const double incr = l2D_diff_norm(next, iterate);
    iterate = std::move(next);
    res.iterations = s;
    if (spec_.g_zero || incr < fp_stop_) {
      res.state = std::move(iterate);
      res.grad_sq = grad_sq(res.state);
      res.uy_sq = uy_sq(res.state);
      double dot = 0.0;
      for (std::size_t k = 0; k < n_modes_; ++k) {
        for (std::size_t i = 0; i < nxp_; ++i) {
          dot += xw_[i] * source(k, i) * res.state.coeffs(k, i);
        }
      }
      res.source_dot_u = dot;
      return res;
    }
    if (s == spec_.tol.fp_max) {
      std::ostringstream os;
      os << "fixed-point iteration did not converge at t = " << t << " (residual " << incr
         << " after " << s << " iterations)";
      throw ConvergenceError(os.str(), incr);
    }
  }
  return res;  // unreachable
}

GalerkinStepper::CoupledResult GalerkinStepper::step_coupled(
    std::span<const SpectralState> history, const MeasurementData& md,
    const Matrix* first_iterate_perturbation) const {
  const std::size_t m = history.size();
  const double t = spec_.time_grid.node(m);
  const Matrix hist = history_sum(history);
  Matrix f_k;
  std::vector<double> f_omega;
  sample_f(m, f_k, f_omega);

  Matrix source(n_modes_, nxp_);
  Matrix g_quad(spec_.g_zero ? 0 : nxp_, spec_.g_zero ? 0 : nq_);
  Matrix g_k(n_modes_, nxp_);
  std::vector<double> g_omega(nxp_, 0.0);

  CoupledResult res;
  SpectralState iterate = history.back();
  if (first_iterate_perturbation) {
    for (std::size_t k = 0; k < n_modes_; ++k) {
      for (std::size_t i = 1; i + 1 < nxp_; ++i) {
        iterate.coeffs(k, i) += (*first_iterate_perturbation)(k, i);
      }
    }
  }
  std::vector<double> h_prev;
  for (int s = 1; s <= spec_.tol.fp_max; ++s) {
    if (!spec_.g_zero) {
      sample_g(t, iterate, g_quad);
      project_g(g_quad, g_k, g_omega);
    }
    double denom_min = 0.0;
    std::vector<double> h =
        h_slice(iterate, spec_.g_zero ? std::span<const double>{} : std::span<const double>(g_omega),
                f_omega, md, m, &denom_min);
    res.diag.denom_min = denom_min;
    for (std::size_t k = 0; k < n_modes_; ++k) {
      for (std::size_t i = 0; i < nxp_; ++i) {
        source(k, i) = (spec_.g_zero ? 0.0 : g_k(k, i)) + f_k(k, i) * h[i];
      }
    }
    SpectralState next = solve_modes(hist, source);
    check_finite(next, t);
    const double incr_u = l2D_diff_norm(next, iterate);
    const double incr_h = h_prev.empty() ? (incr_u == 0.0 ? 0.0 : 1.0)
                                         : l2G_diff_norm(h, h_prev);
    iterate = std::move(next);
    h_prev = std::move(h);
    res.diag.iterations = s;
    res.diag.u_increment = incr_u;
    res.diag.h_increment = incr_h;
    if (incr_u < fp_stop_ && incr_h < fp_stop_) {
      res.state = std::move(iterate);
      // Recompute h from the accepted state so the stored pair satisfies the
      // representation formula exactly at this node.
      res.h = h_from_state(res.state, md, m, &res.diag.denom_min);
      res.grad_sq = grad_sq(res.state);
      res.uy_sq = uy_sq(res.state);
      double dot = 0.0;
      for (std::size_t k = 0; k < n_modes_; ++k) {
        for (std::size_t i = 0; i < nxp_; ++i) {
          dot += xw_[i] * source(k, i) * res.state.coeffs(k, i);
        }
      }
      res.source_dot_u = dot;
      return res;
    }
    if (s == spec_.tol.fp_max) {
      std::ostringstream os;
      os << "coupled u/h iteration did not converge at t = " << t << " (u-increment "
         << incr_u << ", h-increment " << incr_h << " after " << s << " iterations)";
      throw ConvergenceError(os.str(), std::max(incr_u, incr_h));
    }
  }
  return res;  // unreachable
}

}  // namespace subfrac::detail
