#pragma once

#include "gkdv/field.hpp"
#include "gkdv/fft.hpp"

#include <complex>

namespace gkdv {

SpectralField to_spectral(const Field& u);
Field to_physical(const SpectralField& s);

/// Spectral derivative (i xi)^order, order in {1, 2, 3}. The Nyquist mode is
/// dropped for odd orders so the result stays real.
Field derivative(const Field& u, int order);

/// True when the top third of the spectrum is below rel_tol times the peak
/// coefficient. Used as a resolution warning, never as an error.
bool band_limited(const Field& u, double rel_tol = 1e-8);

/// Largest |c_j| in the top third of the spectrum relative to the peak.
double spectral_tail_ratio(const Field& u);

/// H^s norm ||(1 + xi^2)^{s/2} u_hat||, scaled so that s = 0 is the L2 norm.
double sobolev_norm(const Field& u, double s);

/// Bessel potential J^s u = (1 - d^2/dx^2)^{s/2} u.
Field bessel_potential(const Field& u, double s);

/// Applies a Fourier multiplier m(xi) (real or complex valued) to u.
template <class M>
Field apply_multiplier(const Field& u, M&& m) {
  SpectralField s = to_spectral(u);
  const auto& xi = u.grid.wavenumbers();
  for (Eigen::Index j = 0; j < s.coeffs.size(); ++j) s.coeffs(j) *= m(xi(j));
  // The Nyquist coefficient of a real signal must stay real.
  const auto last = s.coeffs.size() - 1;
  s.coeffs(last) = std::real(s.coeffs(last));
  return to_physical(s);
}

}  // namespace gkdv
