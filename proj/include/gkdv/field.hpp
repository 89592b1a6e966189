#pragma once

#include "gkdv/grid.hpp"

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

namespace gkdv {

/// Real samples of u(., t) on a grid.
struct Field {
  Grid grid;
  Eigen::ArrayXd values;
  double t = 0.0;

  Field(Grid g, Eigen::ArrayXd v, double time = 0.0)
      : grid(std::move(g)), values(std::move(v)), t(time) {
    if (values.size() != grid.size()) throw std::invalid_argument("field length does not match grid");
  }

  static Field zeros(const Grid& g, double time = 0.0) {
    return Field(g, Eigen::ArrayXd::Zero(g.size()), time);
  }

  bool all_finite() const { return values.allFinite(); }
  double max_abs() const { return values.abs().maxCoeff(); }
};

/// Half-spectrum coefficients of a real field; Hermitian symmetry is implicit.
struct SpectralField {
  Grid grid;
  Eigen::ArrayXcd coeffs;
  double t = 0.0;
};

/// Samples f at the grid points. Throws std::domain_error on a non-finite sample.
template <class F>
Field sample(F&& f, const Grid& grid, double t = 0.0) {
  Eigen::ArrayXd v(grid.size());
  const auto& x = grid.x();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v(i) = static_cast<double>(f(x(i)));
    if (!std::isfinite(v(i))) throw std::domain_error("sample: non-finite value at x = " + std::to_string(x(i)));
  }
  return Field(grid, std::move(v), t);
}

/// Trapezoid (= rectangle, periodic) quadrature of the samples.
inline double integral(const Eigen::ArrayXd& v, const Grid& g) { return v.sum() * g.dx(); }
inline double integral(const Field& u) { return integral(u.values, u.grid); }

inline double l2_norm(const Field& u) { return std::sqrt(u.values.square().sum() * u.grid.dx()); }

}  // namespace gkdv
