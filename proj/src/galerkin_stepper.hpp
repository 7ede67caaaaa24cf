#pragma once

#include <span>
#include <vector>

#include "subfrac/inverse_solver.hpp"

namespace subfrac::detail {

/// Shared stepping core: implicit L1/Galerkin update with a tridiagonal solve
/// per mode, plus the projections and norms both solvers and the monitors use.
/// All summations run in a fixed order.
class GalerkinStepper {
public:
  explicit GalerkinStepper(const ProblemSpec& spec);

  SpectralState initial_state() const;

  struct StepResult {
    SpectralState state;
    int iterations = 0;
    double grad_sq = 0.0;
    double uy_sq = 0.0;
    double source_dot_u = 0.0;
  };

  /// Advance to node m = history.size() with a known source amplitude slice.
  StepResult step_known_h(std::span<const SpectralState> history,
                          std::span<const double> h_slice) const;

  struct CoupledResult {
    SpectralState state;
    std::vector<double> h;
    StepDiagnostics diag;
    double grad_sq = 0.0;
    double uy_sq = 0.0;
    double source_dot_u = 0.0;
  };

  /// Coupled step: the source slice is recomputed from the running iterate
  /// via the representation formula each pass (Gauss-Seidel ordering).
  CoupledResult step_coupled(std::span<const SpectralState> history,
                             const MeasurementData& md,
                             const Matrix* first_iterate_perturbation) const;

  std::vector<double> h_from_state(const SpectralState& state, const MeasurementData& md,
                                   std::size_t m, double* denom_min_out) const;

  double l2D_sq(const SpectralState& s) const;
  double l2D_diff_norm(const SpectralState& a, const SpectralState& b) const;
  double l2G_diff_norm(std::span<const double> a, std::span<const double> b) const;
  double l2G_sq(std::span<const double> v) const;
  double grad_sq(const SpectralState& s) const;
  double uy_sq(const SpectralState& s) const;

  /// (u(x_i, .), omega) formed from the mode coefficients.
  double measurement_projection(const SpectralState& s, std::size_t i) const;

  double x_weight(std::size_t i) const { return xw_[i]; }
  const ProblemSpec& spec() const { return spec_; }

private:
  void sample_f(std::size_t m, Matrix& f_k, std::vector<double>& f_omega) const;
  void sample_g(double t, const SpectralState& u, Matrix& g_quad) const;
  void project_g(const Matrix& g_quad, Matrix& g_k, std::vector<double>& g_omega) const;
  Matrix history_sum(std::span<const SpectralState> history) const;
  SpectralState solve_modes(const Matrix& hist, const Matrix& source) const;
  void check_finite(const SpectralState& s, double t) const;
  std::vector<double> h_slice(const SpectralState& state, std::span<const double> g_omega,
                              std::span<const double> f_omega, const MeasurementData& md,
                              std::size_t m, double* denom_min_out) const;

  const ProblemSpec& spec_;
  std::size_t n_modes_;
  std::size_t nxp_;  // x points
  std::size_t nq_;   // quadrature nodes
  double beta_;      // Gamma(2 - alpha) tau^alpha
  double fp_stop_;   // internal stopping threshold (fp_tol with safety margin)
  std::vector<double> b_;   // L1 weights
  std::vector<double> xw_;  // x trapezoid weights
  Matrix psi_;              // modes x quad nodes
  std::vector<double> omega_s_, omega_p_;
  std::vector<double> dpsi_omega_;  // (psi_j', omega')
  std::vector<double> psi_omega_;   // (psi_j, omega)
};

}  // namespace subfrac::detail
