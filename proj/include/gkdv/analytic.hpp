#pragma once

#include "gkdv/airy.hpp"
#include "gkdv/field.hpp"

namespace gkdv {

/// Traveling wave u(x, t) = phi_{k,c}(x - c t - x0) of
/// u_t + u_xxx + u^k u_x = 0, with
///   phi_{k,c}(x) = (c_k c sech^2(k sqrt(c) x / 2))^{1/k},  c_k = (k+1)(k+2)/2.
struct SolitonSpec {
  int k = 1;
  double c = 1.0;
  double x0 = 0.0;

  void validate() const;
};

/// c_k = (k + 1)(k + 2) / 2.
double soliton_amplitude_constant(int k);

/// Profile phi_{k,c}(x) (center at the origin, x0 ignored).
double soliton_profile(const SolitonSpec& spec, double x);

/// Traveling solution at (x, t).
double soliton(const SolitonSpec& spec, double x, double t);

/// Samples the traveling soliton at time t (periodic images are not added).
Field sample_soliton(const SolitonSpec& spec, const Grid& grid, double t = 0.0);

/// Exact periodic solution of v_t + v_xxx = 0: multiplies each mode by
/// exp(i xi^3 t). The returned field carries time u0.t + t.
Field linear_propagate(const Field& u0, double t);

/// Standard bump rho(y) = C exp(-1 / (1 - y^2)) on (-1, 1) with unit mass.
double bump(double y);

/// Mollified and shifted datum
///   u0^eps(x) = int rho_eps(y) u0(x + eps - y) dy,  rho_eps(y) = rho(y/eps)/eps,
/// as a discrete convolution on the grid. The kernel only reads u0 on
/// (x, x + 2 eps), so supp u0 in [-R, R] gives supp u0^eps in (-R - 2 eps, R).
/// Requires 0 < eps < 1 and eps > dx.
Field mollify_shift(const Field& u0, double eps);

}  // namespace gkdv
