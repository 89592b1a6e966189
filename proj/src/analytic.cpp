#include "gkdv/analytic.hpp"

#include "gkdv/quadrature.hpp"
#include "gkdv/spectral.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace gkdv {

void SolitonSpec::validate() const {
  if (k < 1) throw std::invalid_argument("soliton: k must be >= 1");
  if (!(c > 0.0)) throw std::invalid_argument("soliton: c must be positive");
  if (!std::isfinite(x0)) throw std::invalid_argument("soliton: x0 must be finite");
}

double soliton_amplitude_constant(int k) { return 0.5 * (k + 1.0) * (k + 2.0); }

double soliton_profile(const SolitonSpec& spec, double x) {
  const double z = 0.5 * spec.k * std::sqrt(spec.c) * x;
  // sech^{2/k}(z) written as exp so large |z| underflows cleanly.
  const double log_sech = -std::abs(z) - std::log1p(std::exp(-2.0 * std::abs(z))) + std::log(2.0);
  const double scale = std::pow(soliton_amplitude_constant(spec.k) * spec.c, 1.0 / spec.k);
  return scale * std::exp(2.0 / spec.k * log_sech);
}

double soliton(const SolitonSpec& spec, double x, double t) {
  return soliton_profile(spec, x - spec.c * t - spec.x0);
}

Field sample_soliton(const SolitonSpec& spec, const Grid& grid, double t) {
  spec.validate();
  return sample([&](double x) { return soliton(spec, x, t); }, grid, t);
}

Field linear_propagate(const Field& u0, double t) {
  SpectralField s = to_spectral(u0);
  const auto& xi = u0.grid.wavenumbers();
  for (Eigen::Index j = 0; j < s.coeffs.size(); ++j) {
    s.coeffs(j) *= std::polar(1.0, xi(j) * xi(j) * xi(j) * t);
  }
  s.coeffs(s.coeffs.size() - 1) = 0.0;
  s.t = u0.t + t;
  return to_physical(s);
}

double bump(double y) {
  static const double norm = [] {
    return integrate([](double s) { return std::abs(s) < 1.0 ? std::exp(-1.0 / (1.0 - s * s)) : 0.0; },
                     -1.0, 1.0, 1e-15);
  }();
  if (std::abs(y) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - y * y)) / norm;
}

Field mollify_shift(const Field& u0, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("mollify_shift: eps must lie in (0, 1)");
  const double dx = u0.grid.dx();
  if (!(eps > dx)) throw std::invalid_argument("mollify_shift: eps must exceed the grid spacing");
  const int n = u0.grid.size();

  // u^eps(x_i) = sum_m w_m u0(x_i + m dx), w_m ~ rho_eps(eps - m dx), m = 1..M.
  std::vector<double> w;
  double mass = 0.0;
  for (int m = 1; m * dx < 2.0 * eps; ++m) {
    const double v = bump((eps - m * dx) / eps) / eps;
    w.push_back(v);
    mass += v * dx;
  }
  for (double& v : w) v *= dx / mass;

  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t m = 0; m < w.size(); ++m) acc += w[m] * u0.values((i + 1 + static_cast<int>(m)) % n);
    out(i) = acc;
  }
  return Field(u0.grid, std::move(out), u0.t);
}

}  // namespace gkdv
