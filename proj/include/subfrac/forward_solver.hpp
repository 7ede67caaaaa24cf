#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "subfrac/matrix.hpp"
#include "subfrac/problem.hpp"

namespace subfrac {

/// Galerkin coefficient slice c_j(t_m, x_i) at one time node.
/// Boundary columns (x = 0, 1) are identically zero.
struct SpectralState {
  Matrix coeffs;  // modes x (Nx + 1)
};

/// Both sides of the discrete energy identity at an accepted step:
/// lhs = 0.5 D^alpha_L1 ||u||^2 + ||grad u||^2 + ||u_y||^2, rhs = (g + f h, u).
struct EnergyRecord {
  double lhs = 0.0;
  double rhs = 0.0;
};

struct SolverSettings {
  double fp_tol = 1e-10;
  int fp_max = 50;
};

struct Trajectory {
  std::vector<SpectralState> states;  // one per time node, index 0 = initial data
  std::vector<int> fp_iterations;     // per step 1..M
  std::vector<EnergyRecord> energy;   // per step 1..M
  std::uint64_t spec_fingerprint = 0;
  SolverSettings settings;
};

/// Projection of the initial data onto the basis: b_j(x_i) = (phi(x_i,.), psi_j).
SpectralState project_initial(const ProblemSpec& spec);

/// One implicit L1/Galerkin step to node m = history.size() with a known
/// source amplitude slice. The linear part is solved implicitly (tridiagonal
/// solve per mode); the reaction term is lagged and fixed-point iterated.
SpectralState forward_step(std::span<const SpectralState> history,
                           std::span<const double> h_slice, const ProblemSpec& spec,
                           int* iterations = nullptr);

/// Full trajectory for a known source amplitude h(t_m, x_i).
Trajectory solve_forward(const ProblemSpec& spec, const Matrix& h_field);

/// ||u||^2 in L2(D) for a coefficient slice (Parseval in y, trapezoid in x).
double state_norm_sq(const SpectralState& state, const ProblemSpec& spec);

/// Relative L2(D) distance to a closed-form field at one time node.
double state_error_vs(const SpectralState& state, const ProblemSpec& spec, double t,
                      const std::function<double(double, double, double)>& u_ref);

std::uint64_t spec_fingerprint(const ProblemSpec& spec);

}  // namespace subfrac
