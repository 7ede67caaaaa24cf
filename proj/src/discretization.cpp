#include "subfrac/discretization.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace subfrac {

namespace {
constexpr double kPi = std::numbers::pi;
const double kNorm = std::sqrt(2.0 / kPi);
}  // namespace

SineBasis::SineBasis(std::size_t n_modes) : n_modes_(n_modes) {
  if (n_modes < 1) throw std::invalid_argument("SineBasis: need at least one mode");
}

double SineBasis::eval(std::size_t k, double y) const {
  return kNorm * std::sin((double)k * y);
}

double SineBasis::deriv(std::size_t k, double y) const {
  return kNorm * (double)k * std::cos((double)k * y);
}

XGrid::XGrid(std::size_t cells) : cells_(cells) {
  if (cells < 2) throw std::invalid_argument("XGrid: need at least 2 cells (3 nodes)");
  dx_ = 1.0 / (double)cells;
}

YQuadrature YQuadrature::composite_trapezoid(std::size_t panels) {
  if (panels < 2) throw std::invalid_argument("YQuadrature: need at least 2 panels");
  YQuadrature q;
  const double h = kPi / (double)panels;
  q.nodes_.resize(panels + 1);
  q.weights_.assign(panels + 1, h);
  for (std::size_t i = 0; i <= panels; ++i) q.nodes_[i] = h * (double)i;
  q.nodes_.back() = kPi;
  q.weights_.front() = 0.5 * h;
  q.weights_.back() = 0.5 * h;
  return q;
}

YQuadrature YQuadrature::for_basis(const SineBasis& basis, std::size_t min_panels) {
  return composite_trapezoid(std::max(4 * basis.modes(), min_panels));
}

Matrix stiffness_coeffs(std::size_t n_modes) {
  if (n_modes < 1) throw std::invalid_argument("stiffness_coeffs: N must be >= 1");
  Matrix a(n_modes, n_modes, 0.0);
  for (std::size_t k = 1; k <= n_modes; ++k) {
    a(k - 1, k - 1) = (double)(k * k);
  }
  return a;
}

std::vector<double> project_y(std::span<const double> field, const SineBasis& basis,
                              const YQuadrature& quad) {
  if (field.size() != quad.size()) {
    throw std::invalid_argument("project_y: field has " + std::to_string(field.size()) +
                                " samples, quadrature has " + std::to_string(quad.size()) +
                                " nodes");
  }
  std::vector<double> coeffs(basis.modes(), 0.0);
  for (std::size_t k = 1; k <= basis.modes(); ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < quad.size(); ++i) {
      acc += quad.weight(i) * field[i] * basis.eval(k, quad.node(i));
    }
    coeffs[k - 1] = acc;
  }
  return coeffs;
}

std::vector<double> reconstruct_y(std::span<const double> coeffs, const SineBasis& basis,
                                  std::span<const double> y_nodes) {
  std::vector<double> out(y_nodes.size(), 0.0);
  const std::size_t n = std::min(coeffs.size(), basis.modes());
  for (std::size_t i = 0; i < y_nodes.size(); ++i) {
    double acc = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      acc += coeffs[k - 1] * basis.eval(k, y_nodes[i]);
    }
    out[i] = acc;
  }
  return out;
}

std::vector<double> laplacian_x(std::span<const double> field, const XGrid& grid) {
  if (field.size() != grid.points()) {
    throw std::invalid_argument("laplacian_x: field has " + std::to_string(field.size()) +
                                " samples, grid has " + std::to_string(grid.points()) +
                                " nodes");
  }
  std::vector<double> out(field.size(), 0.0);
  const double inv = 1.0 / (grid.dx() * grid.dx());
  for (std::size_t i = 1; i + 1 < field.size(); ++i) {
    out[i] = (field[i - 1] - 2.0 * field[i] + field[i + 1]) * inv;
  }
  return out;  // boundary rows stay 0 (homogeneous Dirichlet)
}

double inner_product_y(std::span<const double> a, std::span<const double> b,
                       const YQuadrature& quad) {
  if (a.size() != quad.size() || b.size() != quad.size()) {
    throw std::invalid_argument("inner_product_y: sample/node count mismatch");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < quad.size(); ++i) {
    acc += quad.weight(i) * a[i] * b[i];
  }
  return acc;
}

}  // namespace subfrac
