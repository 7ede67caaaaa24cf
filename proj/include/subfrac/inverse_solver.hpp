#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "subfrac/estimates.hpp"
#include "subfrac/forward_solver.hpp"

namespace subfrac {

/// Measurement H sampled on the solver grids together with its discrete
/// Caputo derivative (L1, the same operator the state equation uses) and
/// discrete Laplacian. Built once per run; the h-formula reads from it.
struct MeasurementData {
  Matrix H;         // (M+1) x (Nx+1)
  Matrix dalpha_H;  // L1 Caputo derivative per x-column (row 0 is zero)
  Matrix laplace_H; // central-difference Laplacian per time-row

  static MeasurementData build(const ProblemSpec& spec, bool allow_interpolation = false);
};

struct StepDiagnostics {
  int iterations = 0;
  double denom_min = 0.0;    // min |(f, omega)| seen at this node
  double u_increment = 0.0;  // last fixed-point increments
  double h_increment = 0.0;
};

/// Reconstructed source amplitude with per-step diagnostics.
struct SourceField {
  Matrix h;  // (M+1) x (Nx+1)
  std::vector<StepDiagnostics> diag;  // per node 0..M (node 0: direct evaluation)
};

enum class ReconStatus { verified, unverified };

struct ReconstructionResult {
  Trajectory trajectory;
  SourceField source;
  Matrix measurement_residual;   // (u, omega) - H over (t, x)
  double max_rel_residual = 0.0; // max |residual| / max(1, max |H|)
  EstimateReport report;
  ReconStatus status = ReconStatus::unverified;
  std::string status_detail;
};

struct InverseOptions {
  double perturb_scale = 0.0;  // scale of the random first-iterate perturbation
  std::uint64_t seed = 1234;
  bool strict_monitor = false;
};

/// The representation-formula slice
///   h(t_m, x) = (D^alpha H - Lap H - (g(u), omega) + (u_y, omega')) / (f, omega)
/// evaluated from a coefficient state; (u_y, omega') is formed spectrally.
std::vector<double> compute_h_slice(const SpectralState& state, const MeasurementData& md,
                                    std::size_t m, const ProblemSpec& spec,
                                    double* denom_min = nullptr);

/// One coupled step: h from the current iterate, then the Galerkin update,
/// repeated until both the u- and h-increments fall below the fixed-point
/// tolerance. Returns the accepted state and source slice.
std::pair<SpectralState, std::vector<double>> inverse_step(
    std::span<const SpectralState> history, const MeasurementData& md,
    const ProblemSpec& spec, StepDiagnostics* diag = nullptr,
    const Matrix* first_iterate_perturbation = nullptr);

/// Full reconstruction of the pair {u, h} from the measurement.
/// Validates the spec (including compatibility) before solving.
ReconstructionResult solve_inverse(const ProblemSpec& spec, const MeasurementData& md,
                                   const InverseOptions& opts = {});
ReconstructionResult solve_inverse(const ProblemSpec& spec, const InverseOptions& opts = {});

struct UniquenessReport {
  double u_diff = 0.0;  // max over t of ||u1 - u2||_{L2(D)}
  double h_diff = 0.0;  // max over t of ||h1 - h2||_{L2(G)}
  bool perturbed_converged = true;
  int max_iterations = 0;
  std::string note;
};

/// Re-runs the reconstruction with the inner iteration started from a
/// perturbed first iterate (scale x seeded random field at every step) and
/// reports how far the two fixed points land apart.
UniquenessReport uniqueness_probe(const ProblemSpec& spec, const MeasurementData& md,
                                  double perturbation_scale, std::uint64_t seed);

struct WeakFormStats {
  double max_defect = 0.0;      // max |lhs - rhs| over probes and time nodes
  double scale = 0.0;           // max max(|lhs|, |rhs|)
  double max_defect_rel = 0.0;  // max_defect / scale
};

/// Evaluates both sides of the weak identity against separable probe test
/// functions sin(p pi x) psi_q(y) at every time node, with gradients formed
/// independently of the solver's stencil.
WeakFormStats weak_form_residual(const ReconstructionResult& result, const ProblemSpec& spec,
                                 std::size_t probe_count = 9);

}  // namespace subfrac
