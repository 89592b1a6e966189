#include "gkdv/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace gkdv {

SpectralField to_spectral(const Field& u) {
  SpectralField s{u.grid, {}, u.t};
  fft::forward(u.values, s.coeffs);
  return s;
}

Field to_physical(const SpectralField& s) {
  Eigen::ArrayXd v;
  fft::inverse(s.coeffs, s.grid.size(), v);
  return Field(s.grid, std::move(v), s.t);
}

Field derivative(const Field& u, int order) {
  if (order < 1 || order > 3) throw std::invalid_argument("derivative order must be 1, 2 or 3");
  SpectralField s = to_spectral(u);
  const auto& xi = u.grid.wavenumbers();
  const std::complex<double> i(0.0, 1.0);
  for (Eigen::Index j = 0; j < s.coeffs.size(); ++j) s.coeffs(j) *= std::pow(i * xi(j), order);
  const auto last = s.coeffs.size() - 1;
  if (order % 2 == 1) s.coeffs(last) = 0.0;
  else s.coeffs(last) = std::real(s.coeffs(last));
  return to_physical(s);
}

double spectral_tail_ratio(const Field& u) {
  const SpectralField s = to_spectral(u);
  const Eigen::ArrayXd mag = s.coeffs.abs();
  const double peak = mag.maxCoeff();
  if (peak == 0.0) return 0.0;
  const Eigen::Index start = 2 * mag.size() / 3;
  return mag.tail(mag.size() - start).maxCoeff() / peak;
}

bool band_limited(const Field& u, double rel_tol) { return spectral_tail_ratio(u) < rel_tol; }

double sobolev_norm(const Field& u, double s) {
  if (!(s >= 0.0)) throw std::invalid_argument("sobolev_norm: s must be nonnegative");
  if (s == 0.0) return l2_norm(u);
  const SpectralField c = to_spectral(u);
  const auto& xi = u.grid.wavenumbers();
  const int n = u.grid.size();
  double sum = 0.0;
  for (Eigen::Index j = 0; j < c.coeffs.size(); ++j) {
    // Interior modes stand for the pair +-xi_j.
    const double mult = (j == 0 || j == c.coeffs.size() - 1) ? 1.0 : 2.0;
    sum += mult * std::pow(1.0 + xi(j) * xi(j), s) * std::norm(c.coeffs(j));
  }
  return std::sqrt(sum * u.grid.dx() / n);
}

Field bessel_potential(const Field& u, double s) {
  return apply_multiplier(u, [s](double xi) { return std::pow(1.0 + xi * xi, 0.5 * s); });
}

}  // namespace gkdv
