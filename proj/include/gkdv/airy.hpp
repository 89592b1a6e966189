#pragma once

namespace gkdv {

/// Airy function Ai(x), normalized so Ai(0) = 3^{-2/3} / Gamma(2/3).
///
/// Maclaurin series (extended precision, compensated) on [-8, 5], Taylor
/// re-expansion about x = 8 on (5, 8), the exponentially small asymptotic
/// series for x >= 8 and the oscillatory connection-formula expansion for
/// x < -8. At least ten significant digits on [-20, 20]. Underflows to 0 past
/// x ~ 105.
double airy(double x);

/// Ai'(x), same regions as `airy`.
double airy_prime(double x);

/// Ai(x) from the contour-shifted integral
///   Ai(x) = exp(-2/3 x^{3/2}) / pi * int_0^inf exp(-sqrt(x) s^2) cos(s^3/3) ds,
/// x > 0, evaluated with adaptive Gauss-Kronrod quadrature. Independent of
/// `airy`; used as a cross-check.
double airy_by_quadrature(double x);

}  // namespace gkdv
