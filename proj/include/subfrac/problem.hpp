#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "subfrac/discretization.hpp"
#include "subfrac/fraccalc.hpp"
#include "subfrac/matrix.hpp"

namespace subfrac {

using SpaceTimeFn = std::function<double(double t, double x, double y)>;
using ReactionFn = std::function<double(double t, double x, double y, double u)>;
using InitialFn = std::function<double(double x, double y)>;
using ScalarFn = std::function<double(double y)>;
using MeasurementFn = std::function<double(double t, double x)>;

/// Integral measurement H(t, x), either a callable or a sampled table carrying
/// its own grids. Tables are interpolated bilinearly only when the caller
/// explicitly allows grid mismatch.
class Measurement {
public:
  static Measurement from_function(MeasurementFn fn);
  static Measurement from_table(TimeGrid t_grid, std::vector<double> x_nodes, Matrix values);

  bool is_table() const { return table_.has_value(); }

  /// Sample onto the solver grids. Throws on grid mismatch unless
  /// allow_interpolation is set.
  Matrix sample(const TimeGrid& time_grid, const XGrid& x_grid,
                bool allow_interpolation = false) const;

private:
  Measurement() = default;
  MeasurementFn fn_;
  struct Table {
    TimeGrid t_grid;
    std::vector<double> x_nodes;
    Matrix values;  // (M+1) x (Nx+1)
  };
  std::optional<Table> table_;
};

/// Numeric knobs; every threshold the solvers and checks use lives here.
struct Tolerances {
  double comp_tol = 1e-8;      // compatibility |(phi, omega) - H(0, x)|
  double denom_floor = 1e-6;   // minimum admissible |(f, omega)|
  double lip_slack = 0.05;     // allowance on the sampled Lipschitz quotient
  double fp_tol = 1e-10;       // fixed-point increment target
  int fp_max = 50;             // fixed-point iteration budget
  double recon_tol = 1e-3;     // relative overdetermination residual
  double monitor_tol = 1e-7;   // relative slack for the discrete energy identity
};

/// Full problem data: domain, grids, order, data functions and the assumption
/// constants they are checked against.
struct ProblemSpec {
  FracOrder alpha;
  double T;
  TimeGrid time_grid;
  XGrid x_grid;
  SineBasis basis;
  YQuadrature quad;

  SpaceTimeFn f;
  ReactionFn g;
  bool g_zero = false;  // set when g is identically zero; skips the reaction path
  InitialFn phi;
  ScalarFn omega;
  ScalarFn omega_prime;
  Measurement H;

  double ell0 = 0.0;  // Lipschitz constant of g in u
  double f_M = 0.0;   // bound constant for |f/(f,omega)| <= f_M/sqrt(pi)

  Tolerances tol;
};

struct AssumptionVerdict {
  std::string name;
  bool pass = false;
  double margin = 0.0;  // distance to the threshold; negative when failing
  std::string location;
  std::string detail;
};

struct ValidationReport {
  std::vector<AssumptionVerdict> checks;
  double ell0_est = 0.0;
  double f_M_est = 0.0;
  double omega_norm_sq = 0.0;        // ||omega||^2 in L2(0,pi)
  double omega_prime_norm_sq = 0.0;  // ||omega'||^2
  double denom_min = 0.0;            // min |(f, omega)| over the grid
  bool all_pass() const;
  std::string summary() const;
};

/// Checks every ProblemSpec assumption on the discrete grids; never mutates.
ValidationReport validate(const ProblemSpec& spec);

struct ConstantEstimates {
  double ell0_est = 0.0;
  double f_M_est = 0.0;
  double omega_norm_sq = 0.0;
  double omega_prime_norm_sq = 0.0;
};

/// Empirical sup estimates over a nested sample lattice (sup never decreases
/// under refinement because coarser lattices are subsets of finer ones).
ConstantEstimates estimate_constants(const ProblemSpec& spec, std::size_t lattice = 32);

struct GridSizes {
  std::size_t M = 128;
  std::size_t Nx = 64;
  std::size_t N = 16;
  double T = 1.0;
  std::size_t quad_panels = 0;  // 0 -> max(4N, 256)
};

/// Exact solution pair fabricated backwards from closed forms, used as a
/// verification oracle. The PDE holds pointwise for (u_exact, h_exact).
struct ManufacturedCase {
  ProblemSpec spec;
  std::function<double(double t, double x, double y)> u_exact;
  MeasurementFn h_exact;
  std::function<double(double t, double x, double y)> dalpha_u;  // Caputo D_t^alpha u
  std::string notes;
  double residual_tol = 2e-3;  // pointwise PDE residual budget on a 4x-refined grid
};

/// Built-in cases MC1 (nonlinear), MC2 (linear), MC3 (alpha = 1 diffusion).
ManufacturedCase manufactured_case(const std::string& id, FracOrder alpha,
                                   const GridSizes& sizes);

}  // namespace subfrac
