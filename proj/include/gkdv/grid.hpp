#pragma once

#include <Eigen/Core>

#include <memory>

namespace gkdv {

/// Uniform periodic grid on [-L, L) used as a surrogate for the real line.
///
/// Points are x_i = -L + i*dx, i = 0..n-1, with dx = 2L/n. Spectral data is
/// stored as a half spectrum, so `wavenumbers()` holds xi_j = pi*j/L for
/// j = 0..n/2 (the last entry is the Nyquist mode).
class Grid {
 public:
  /// Throws std::invalid_argument unless L > 0 and n is a power of two >= 16.
  Grid(double half_width, int n_points);

  double half_width() const { return half_width_; }
  double length() const { return 2.0 * half_width_; }
  int size() const { return n_; }
  int spectrum_size() const { return n_ / 2 + 1; }
  double dx() const { return length() / n_; }

  const Eigen::ArrayXd& x() const { return *x_; }
  const Eigen::ArrayXd& wavenumbers() const { return *xi_; }

  /// Wavenumbers in symmetric order j = -n/2 .. n/2-1.
  Eigen::ArrayXd centered_wavenumbers() const;

  /// Index of the grid point nearest to x (wrapped periodically).
  int nearest_index(double x) const;

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.half_width_ == b.half_width_ && a.n_ == b.n_;
  }

 private:
  double half_width_;
  int n_;
  std::shared_ptr<const Eigen::ArrayXd> x_;
  std::shared_ptr<const Eigen::ArrayXd> xi_;
};

inline Grid make_grid(double half_width, int n_points) { return Grid(half_width, n_points); }

}  // namespace gkdv
