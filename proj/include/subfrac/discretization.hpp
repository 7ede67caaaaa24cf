#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "subfrac/matrix.hpp"

namespace subfrac {

/// Orthonormal sine family psi_k(y) = sqrt(2/pi) sin(k y) on (0, pi), k = 1..N.
/// Diagonalizes the y-stiffness: (psi_j', psi_k') = k^2 delta_jk.
class SineBasis {
public:
  explicit SineBasis(std::size_t n_modes);
  std::size_t modes() const { return n_modes_; }
  double eval(std::size_t k, double y) const;   // psi_k(y), 1-based k
  double deriv(std::size_t k, double y) const;  // psi_k'(y)

private:
  std::size_t n_modes_;
};

/// Uniform Dirichlet grid on [0, 1] with cells() intervals.
class XGrid {
public:
  explicit XGrid(std::size_t cells);
  std::size_t cells() const { return cells_; }    // N_x
  std::size_t points() const { return cells_ + 1; }
  double dx() const { return dx_; }
  double node(std::size_t i) const { return dx_ * (double)i; }

private:
  std::size_t cells_;
  double dx_;
};

/// Composite trapezoid nodes/weights on [0, pi], endpoints included.
class YQuadrature {
public:
  static YQuadrature composite_trapezoid(std::size_t panels);
  /// Panels oversampled 4x relative to the basis (at least min_panels).
  static YQuadrature for_basis(const SineBasis& basis, std::size_t min_panels = 256);

  std::size_t size() const { return nodes_.size(); }
  double node(std::size_t i) const { return nodes_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }

private:
  YQuadrature() = default;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// Stiffness coefficients (psi_j', psi_k') for the sine family: diag(1, 4, ..., N^2).
Matrix stiffness_coeffs(std::size_t n_modes);

/// Coefficients (field, psi_k), k = 1..N, for a field sampled on the quadrature nodes.
std::vector<double> project_y(std::span<const double> field, const SineBasis& basis,
                              const YQuadrature& quad);

/// Pointwise synthesis sum_k c_k psi_k(y) at the given y nodes.
std::vector<double> reconstruct_y(std::span<const double> coeffs, const SineBasis& basis,
                                  std::span<const double> y_nodes);

/// Second-order central-difference Laplacian with homogeneous Dirichlet rows.
std::vector<double> laplacian_x(std::span<const double> field, const XGrid& grid);

/// Quadrature approximation of int_0^pi a b dy.
double inner_product_y(std::span<const double> a, std::span<const double> b,
                       const YQuadrature& quad);

}  // namespace subfrac
