#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace subfrac {

/// Fractional order alpha in (0, 1]; construction rejects anything else.
class FracOrder {
public:
  explicit FracOrder(double alpha);
  double alpha() const { return alpha_; }

private:
  double alpha_;
};

/// Uniform time grid t_i = i*T/M on [0, T], M >= 1.
///
/// The vector constructor accepts externally supplied nodes (e.g. from a CSV
/// table) and checks t_0 = 0, strict monotonicity and uniform spacing to
/// 1e-12 relative tolerance.
class TimeGrid {
public:
  TimeGrid(double horizon, std::size_t steps);
  explicit TimeGrid(std::vector<double> nodes);

  double horizon() const { return horizon_; }
  std::size_t steps() const { return steps_; }       // M
  std::size_t points() const { return steps_ + 1; }  // M + 1
  double dt() const { return dt_; }
  double node(std::size_t i) const { return nodes_[i]; }
  std::span<const double> nodes() const { return nodes_; }
  bool same_as(const TimeGrid& other, double rel_tol = 1e-12) const;

private:
  double horizon_ = 0.0;
  double dt_ = 0.0;
  std::size_t steps_ = 0;
  std::vector<double> nodes_;
};

/// Scalar samples on a TimeGrid.
struct TimeSeries {
  TimeSeries(TimeGrid g, std::vector<double> v);

  static TimeSeries zeros(const TimeGrid& g);
  static TimeSeries sample(const TimeGrid& g, const std::function<double(double)>& f);

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }

  TimeGrid grid;
  std::vector<double> values;
};

/// Two-parameter Mittag-Leffler function E_{rho,mu}(z) for real z, |z| <= 1e4.
///
/// Taylor series with term-ratio stopping where it is cancellation-safe,
/// exponential asymptotics for z > 50, and the Gorenflo-Mainardi integral
/// representation for strongly negative z when rho < 1. Throws
/// std::invalid_argument for bad parameters, std::overflow_error when the
/// value exceeds double range, std::domain_error for the (unused) corner
/// rho >= 1, z << 0 that none of the supported regions cover.
double mittag_leffler(double rho, double mu, double z);

/// Discrete Riemann-Liouville integral J^alpha on a uniform grid.
/// Product-trapezoid rule: the weakly singular kernel is integrated exactly
/// against the piecewise-linear interpolant of v. Value at t_0 is exactly 0.
TimeSeries rl_integral(const TimeSeries& v, FracOrder order);

/// Discrete Caputo derivative, L1 scheme. Node t_0 carries 0 by convention.
/// At alpha = 1 the scheme degenerates exactly to the backward difference.
TimeSeries caputo_l1(const TimeSeries& v, FracOrder order);

/// r = J^alpha(D^alpha v) - (v - v(0)), the discrete defect of the
/// integral/derivative identity.
TimeSeries jd_identity_residual(const TimeSeries& v, FracOrder order);

/// Fractional Gronwall majorant
///   v0 * E_alpha(c1 t^alpha) + Gamma(alpha) E_{alpha,alpha}(c1 t^alpha) J^alpha c2(t)
/// evaluated at every grid node. Requires c1 >= 0 and c2 >= 0.
TimeSeries gronwall_bound(double v0, double c1, const TimeSeries& c2, FracOrder order);

/// (lower, upper) bracket for J^alpha v at the final time:
///   T^{alpha-1}/Gamma(alpha) * int_0^T v   and   T^alpha/(alpha Gamma(alpha)) * max v.
/// Requires v >= 0.
std::pair<double, double> frac_integral_bracket(const TimeSeries& v, FracOrder order);

/// L1 difference weights b_j = (j+1)^{1-alpha} - j^{1-alpha}; b_0 = 1 exactly.
std::vector<double> l1_weights(std::size_t count, double alpha);

/// Scale Gamma(2-alpha) * tau^alpha dividing the L1 difference sum.
double l1_scale(double tau, double alpha);

}  // namespace subfrac
