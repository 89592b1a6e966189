#include "gkdv/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gkdv {

namespace {
bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

Grid::Grid(double half_width, int n_points) : half_width_(half_width), n_(n_points) {
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw std::invalid_argument("grid half width must be positive, got " + std::to_string(half_width));
  }
  if (n_points < 16 || !is_power_of_two(n_points)) {
    throw std::invalid_argument("grid point count must be a power of two >= 16, got " +
                                std::to_string(n_points));
  }
  const double h = length() / n_;
  auto x = std::make_shared<Eigen::ArrayXd>(n_);
  for (int i = 0; i < n_; ++i) (*x)(i) = -half_width_ + i * h;
  auto xi = std::make_shared<Eigen::ArrayXd>(spectrum_size());
  for (int j = 0; j < spectrum_size(); ++j) (*xi)(j) = std::numbers::pi * j / half_width_;
  x_ = std::move(x);
  xi_ = std::move(xi);
}

Eigen::ArrayXd Grid::centered_wavenumbers() const {
  Eigen::ArrayXd out(n_);
  for (int j = 0; j < n_; ++j) out(j) = std::numbers::pi * (j - n_ / 2) / half_width_;
  return out;
}

int Grid::nearest_index(double x) const {
  const long i = std::lround((x + half_width_) / dx());
  return static_cast<int>(((i % n_) + n_) % n_);
}

}  // namespace gkdv
