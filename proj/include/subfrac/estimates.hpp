#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "subfrac/fraccalc.hpp"
#include "subfrac/problem.hpp"

namespace subfrac {

struct SpectralState;
struct Trajectory;
struct SourceField;

struct OmegaNorms {
  double omega_sq = 0.0;        // ||omega||^2
  double omega_prime_sq = 0.0;  // ||omega'||^2
};

/// L_omega^2 = ell0^2 ||omega||^2/||omega'||^2 + 3 f_M^2 ||omega'||^2/2 + ell0 + 1/2.
double l_omega_sq(double ell0, double f_M, const OmegaNorms& norms);

/// H0^2(t) = ||D^alpha H(t,.)||^2 + ||Lap H(t,.)||^2 with the discrete operators.
TimeSeries h0_profile(const ProblemSpec& spec);

/// c2(t) = (1 + 2||omega||^2/||omega'||^2) ||g(t,.,.,0)||^2 + H0^2(t)/||omega'||^2.
TimeSeries c2_profile(const ProblemSpec& spec);

/// Scalars the K-bound assembly needs; extracted from a spec or synthesized
/// directly in property tests.
struct KBoundData {
  double alpha = 0.5;
  double T = 1.0;
  double phi_sq = 0.0;        // ||phi^n||^2 (projected initial data)
  double grad_phi_sq = 0.0;   // ||grad phi^n||^2
  double phi_y_sq = 0.0;      // ||phi_y^n||^2
  double max_c2 = 0.0;
  double max_g0_sq = 0.0;     // max_t ||g(t,.,.,0)||^2
  double max_H0_sq = 0.0;
  double ell0 = 0.0;
  double f_M = 0.0;
  double omega_sq = 0.0;
  double omega_prime_sq = 0.0;
  double denom_min = 1.0;     // min |(f, omega)|
};

struct KBounds {
  double K1 = 0.0, K2 = 0.0, K3 = 0.0, K4 = 0.0;
  double L_omega_sq = 0.0;
  double ml_bound = 0.0;  // sweep max of E_alpha, E_{alpha,alpha} on [0, 2 L^2 T^alpha], x1.1
  bool saturated = false; // some constant hit the 1e300 representability cap
  std::vector<std::pair<std::string, double>> items;  // auditable assembly pieces
};

KBoundData k_bound_data(const ProblemSpec& spec);
KBounds k_bounds_from(const KBoundData& d);
KBounds k_bounds(const ProblemSpec& spec);

struct MonitorVerdict {
  std::string name;
  double observed = 0.0;
  double bound = 0.0;
  double ratio = 0.0;  // observed / bound
  std::size_t worst_node = 0;
  bool pass = false;
};

/// Compares the four discrete solution functionals against K1..K4.
/// Violations are findings, not exceptions.
std::vector<MonitorVerdict> monitor(const Trajectory& trajectory, const SourceField& source,
                                    const KBounds& k, const ProblemSpec& spec);

struct EstimateReport {
  double L_omega_sq = 0.0;
  TimeSeries c2;
  TimeSeries H0_sq;
  KBounds k;
  std::vector<MonitorVerdict> verdicts;
  double max_energy_slack = 0.0;  // max (lhs - rhs) over accepted steps
  bool energy_ok = true;

  EstimateReport()
      : c2(TimeGrid(1.0, 1), {0.0, 0.0}), H0_sq(TimeGrid(1.0, 1), {0.0, 0.0}) {}

  std::string summary() const;
};

/// Assembles constants, profiles, K bounds and monitor verdicts for a run.
EstimateReport make_estimate_report(const ProblemSpec& spec, const Trajectory& trajectory,
                                    const SourceField& source);

}  // namespace subfrac
