#include "subfrac/fraccalc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace subfrac {

namespace {

constexpr double kPi = std::numbers::pi;

// 1/Gamma(x) with the poles at x = 0, -1, -2, ... mapped to 0.
double reciprocal_gamma(double x) {
  if (x <= 0.0) {
    const double r = std::round(x);
    if (std::abs(x - r) < 1e-12) return 0.0;
  }
  return 1.0 / std::tgamma(x);
}

struct TaylorSum {
  long double value = 0.0L;
  long double max_term = 0.0L;
  bool converged = false;
  bool overflowed = false;
};

// Plain power series sum_k z^k / Gamma(rho k + mu) in extended precision.
// Terms are formed in log space so large intermediate Gamma values cannot
// overflow before the term itself does.
TaylorSum ml_taylor(double rho, double mu, double z) {
  TaylorSum out;
  const long double lz = (z == 0.0) ? 0.0L : std::log(std::abs((long double)z));
  const bool negative = z < 0.0;
  long double prev_mag = std::numeric_limits<long double>::max();
  int small_streak = 0;
  for (long k = 0; k < 200000; ++k) {
    const long double lg = lgammal((long double)rho * k + (long double)mu);
    const long double lt = (z == 0.0 && k > 0) ? -1e30L : (long double)k * lz - lg;
    if (lt > 11300.0L) {  // beyond long double range
      out.overflowed = true;
      return out;
    }
    long double term = expl(lt);
    if (negative && (k & 1)) term = -term;
    out.value += term;
    const long double mag = std::abs(term);
    out.max_term = std::max(out.max_term, mag);
    const long double scale = std::max(1.0L, std::abs(out.value));
    if (mag < 1e-22L * scale && mag <= prev_mag) {
      if (++small_streak >= 3) {
        out.converged = true;
        return out;
      }
    } else {
      small_streak = 0;
    }
    prev_mag = mag;
    if (z == 0.0) {  // only k = 0 contributes
      out.converged = true;
      return out;
    }
  }
  return out;
}

// Exponential asymptotics for z > 50, 0 < rho < 2:
//   E = (1/rho) z^{(1-mu)/rho} exp(z^{1/rho}) - sum_{k=1..K} z^{-k}/Gamma(mu - rho k).
double ml_asymptotic_positive(double rho, double mu, double z) {
  const double w = std::pow(z, 1.0 / rho);
  const double lead_log = w + (1.0 - mu) / rho * std::log(z) - std::log(rho);
  if (lead_log > 708.0) {
    throw std::overflow_error("mittag_leffler: value exceeds double range (rho=" +
                              std::to_string(rho) + ", mu=" + std::to_string(mu) +
                              ", z=" + std::to_string(z) + ")");
  }
  double value = std::exp(lead_log);
  double zk = z;
  for (int k = 1; k <= 18; ++k) {
    value -= reciprocal_gamma(mu - rho * k) / zk;
    zk *= z;
  }
  return value;
}

// Adaptive Simpson on [a, b].
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double fa, double fm, double fb, double whole, double tol,
                        int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

// Gorenflo-Mainardi integral representation, valid for z < 0, 0 < rho < 1,
// mu <= 1 (the exponent (1-mu)/rho is then nonnegative, no endpoint
// singularity). E = int_0^inf K(r) dr.
double ml_negative_integral(double rho, double mu, double z) {
  const double s1 = std::sin(kPi * (1.0 - mu));
  const double s2 = std::sin(kPi * (1.0 - mu + rho));
  const double c = std::cos(kPi * rho);
  auto kernel = [&](double r) -> double {
    if (r <= 0.0) return 0.0;
    const double num = r * s1 - z * s2;
    const double den = r * r - 2.0 * r * z * c + z * z;
    return (1.0 / (kPi * rho)) * std::pow(r, (1.0 - mu) / rho) *
           std::exp(-std::pow(r, 1.0 / rho)) * num / den;
  };
  const double cutoff = std::max({1.0, 2.0 * std::abs(z), std::pow(50.0, rho)});
  return integrate(kernel, 0.0, cutoff, 1e-15 * std::max(1.0, std::abs(z)));
}

// mu-reduction: E_{rho,mu}(z) = (E_{rho,mu-rho}(z) - 1/Gamma(mu-rho)) / z.
// Used only for |z| >= 5 so no digits are lost to the division.
double ml_negative(double rho, double mu, double z);

double ml_negative_reduced(double rho, double mu, double z) {
  return (ml_negative(rho, mu - rho, z) - reciprocal_gamma(mu - rho)) / z;
}

double ml_negative(double rho, double mu, double z) {
  if (mu > 1.0) return ml_negative_reduced(rho, mu, z);
  return ml_negative_integral(rho, mu, z);
}

}  // namespace

double mittag_leffler(double rho, double mu, double z) {
  if (!(rho > 0.0) || !(mu > 0.0)) {
    throw std::invalid_argument("mittag_leffler: rho and mu must be positive (got rho=" +
                                std::to_string(rho) + ", mu=" + std::to_string(mu) + ")");
  }
  if (!std::isfinite(z) || std::abs(z) > 1e4) {
    throw std::invalid_argument("mittag_leffler: |z| must be finite and <= 1e4 (got z=" +
                                std::to_string(z) + ")");
  }
  if (z == 0.0) return reciprocal_gamma(mu);

  if (z > 0.0) {
    if (z > 50.0) return ml_asymptotic_positive(rho, mu, z);
    const TaylorSum s = ml_taylor(rho, mu, z);
    if (s.overflowed || !(s.value <= (long double)std::numeric_limits<double>::max())) {
      throw std::overflow_error("mittag_leffler: value exceeds double range (rho=" +
                                std::to_string(rho) + ", mu=" + std::to_string(mu) +
                                ", z=" + std::to_string(z) + ")");
    }
    return (double)s.value;
  }

  // z < 0. Estimate the largest Taylor term to decide whether the alternating
  // series is cancellation-safe in extended precision.
  const double w = std::pow(-z, 1.0 / rho);
  const double kstar = std::max(0.0, (w - mu) / rho);
  const double peak_log = kstar * std::log(-z) - std::lgamma(rho * kstar + mu);
  if (peak_log <= 14.0) {
    const TaylorSum s = ml_taylor(rho, mu, z);
    if (s.converged) return (double)s.value;
  }
  if (rho < 1.0) return ml_negative(rho, mu, z);
  if (rho == 1.0 && mu == 1.0) return std::exp(z);
  if (rho == 2.0 && mu == 1.0) return std::cos(std::sqrt(-z));
  throw std::domain_error(
      "mittag_leffler: strongly negative z with rho >= 1 is outside the supported region "
      "(rho=" + std::to_string(rho) + ", mu=" + std::to_string(mu) + ", z=" +
      std::to_string(z) + ")");
}

FracOrder::FracOrder(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0) || !(alpha <= 1.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("FracOrder: alpha must lie in (0, 1], got " +
                                std::to_string(alpha));
  }
}

TimeGrid::TimeGrid(double horizon, std::size_t steps) : horizon_(horizon), steps_(steps) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("TimeGrid: horizon must be positive and finite");
  }
  if (steps < 1) {
    throw std::invalid_argument("TimeGrid: insufficient data, need at least one step (M >= 1)");
  }
  dt_ = horizon / (double)steps;
  nodes_.resize(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) nodes_[i] = horizon * (double)i / (double)steps;
  nodes_.back() = horizon;
}

TimeGrid::TimeGrid(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) {
    throw std::invalid_argument("TimeGrid: insufficient data, need at least one step (M >= 1)");
  }
  if (nodes_.front() != 0.0) {
    throw std::invalid_argument("TimeGrid: first node must be t = 0");
  }
  steps_ = nodes_.size() - 1;
  horizon_ = nodes_.back();
  if (!(horizon_ > 0.0)) throw std::invalid_argument("TimeGrid: horizon must be positive");
  dt_ = horizon_ / (double)steps_;
  for (std::size_t i = 1; i <= steps_; ++i) {
    const double step = nodes_[i] - nodes_[i - 1];
    if (!(step > 0.0)) throw std::invalid_argument("TimeGrid: nodes must strictly increase");
    if (std::abs(step - dt_) > 1e-12 * std::max(1.0, dt_)) {
      throw std::invalid_argument("TimeGrid: spacing is non-uniform at node " +
                                  std::to_string(i));
    }
  }
}

bool TimeGrid::same_as(const TimeGrid& other, double rel_tol) const {
  if (steps_ != other.steps_) return false;
  return std::abs(horizon_ - other.horizon_) <= rel_tol * std::max(1.0, horizon_);
}

TimeSeries::TimeSeries(TimeGrid g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid.points()) {
    throw std::invalid_argument("TimeSeries: dimension mismatch, expected " +
                                std::to_string(grid.points()) + " values, got " +
                                std::to_string(values.size()));
  }
}

TimeSeries TimeSeries::zeros(const TimeGrid& g) {
  return TimeSeries(g, std::vector<double>(g.points(), 0.0));
}

TimeSeries TimeSeries::sample(const TimeGrid& g, const std::function<double(double)>& f) {
  std::vector<double> v(g.points());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(g.node(i));
  return TimeSeries(g, std::move(v));
}

std::vector<double> l1_weights(std::size_t count, double alpha) {
  std::vector<double> b(count);
  if (count == 0) return b;
  b[0] = 1.0;
  const double e = 1.0 - alpha;
  for (std::size_t j = 1; j < count; ++j) {
    b[j] = std::pow((double)(j + 1), e) - std::pow((double)j, e);
  }
  return b;
}

double l1_scale(double tau, double alpha) {
  return std::tgamma(2.0 - alpha) * std::pow(tau, alpha);
}

TimeSeries caputo_l1(const TimeSeries& v, FracOrder order) {
  const double alpha = order.alpha();
  const TimeGrid& g = v.grid;
  const std::size_t m_count = g.steps();
  const std::vector<double> b = l1_weights(m_count, alpha);
  const double scale = l1_scale(g.dt(), alpha);

  TimeSeries out = TimeSeries::zeros(g);
  for (std::size_t m = 1; m <= m_count; ++m) {
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      acc += b[j] * (v.values[m - j] - v.values[m - j - 1]);
    }
    out.values[m] = acc / scale;
  }
  return out;
}

TimeSeries rl_integral(const TimeSeries& v, FracOrder order) {
  const double alpha = order.alpha();
  const TimeGrid& g = v.grid;
  const std::size_t m_count = g.steps();
  const double tau = g.dt();
  const double front = std::pow(tau, alpha) / std::tgamma(alpha);

  // Per-interval kernel moments, p = distance in steps from the evaluation node.
  std::vector<double> pa(m_count + 1), pa1(m_count + 1);
  for (std::size_t p = 0; p <= m_count; ++p) {
    pa[p] = std::pow((double)p, alpha);
    pa1[p] = std::pow((double)p, alpha + 1.0);
  }

  TimeSeries out = TimeSeries::zeros(g);
  for (std::size_t m = 1; m <= m_count; ++m) {
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t p = m - j;
      const double q0 = (pa[p] - pa[p - 1]) / alpha;
      const double q1 = (double)p * q0 - (pa1[p] - pa1[p - 1]) / (alpha + 1.0);
      acc += v.values[j] * (q0 - q1) + v.values[j + 1] * q1;
    }
    out.values[m] = front * acc;
  }
  return out;
}

TimeSeries jd_identity_residual(const TimeSeries& v, FracOrder order) {
  const TimeSeries d = caputo_l1(v, order);
  TimeSeries r = rl_integral(d, order);
  for (std::size_t i = 0; i < r.size(); ++i) {
    r.values[i] -= v.values[i] - v.values.front();
  }
  return r;
}

TimeSeries gronwall_bound(double v0, double c1, const TimeSeries& c2, FracOrder order) {
  if (!(v0 >= 0.0)) throw std::invalid_argument("gronwall_bound: v0 must be nonnegative");
  if (!(c1 >= 0.0)) throw std::invalid_argument("gronwall_bound: c1 must be nonnegative");
  for (std::size_t i = 0; i < c2.size(); ++i) {
    if (!(c2.values[i] >= 0.0)) {
      throw std::domain_error("gronwall_bound: c2 has a negative entry at node " +
                              std::to_string(i));
    }
  }
  const double alpha = order.alpha();
  const double ga = std::tgamma(alpha);
  const TimeSeries j = rl_integral(c2, order);
  TimeSeries out = TimeSeries::zeros(c2.grid);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double za = c1 * std::pow(c2.grid.node(i), alpha);
    out.values[i] = v0 * mittag_leffler(alpha, 1.0, za) +
                    ga * mittag_leffler(alpha, alpha, za) * j.values[i];
  }
  return out;
}

std::pair<double, double> frac_integral_bracket(const TimeSeries& v, FracOrder order) {
  double vmax = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v.values[i] >= 0.0)) {
      throw std::domain_error("frac_integral_bracket: v has a negative entry at node " +
                              std::to_string(i));
    }
    vmax = std::max(vmax, v.values[i]);
  }
  const double alpha = order.alpha();
  const double T = v.grid.horizon();
  const double tau = v.grid.dt();
  double trapz = 0.0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    trapz += 0.5 * tau * (v.values[i] + v.values[i + 1]);
  }
  const double lower = std::pow(T, alpha - 1.0) / std::tgamma(alpha) * trapz;
  const double upper = std::pow(T, alpha) / (alpha * std::tgamma(alpha)) * vmax;
  return {lower, upper};
}

}  // namespace subfrac
