#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace gkdv {

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
double gk15(F& f, double a, double b, double& err) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double k = kKronrodWeights[7] * fc;
  double g = kGaussWeights[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double d = h * kKronrodNodes[i];
    const double s = f(c - d) + f(c + d);
    k += kKronrodWeights[i] * s;
    if (i % 2 == 1) g += kGaussWeights[i / 2] * s;
  }
  err = std::abs((k - g) * h);
  return k * h;
}

template <class F>
double adaptive(F& f, double a, double b, double whole, double err, double tol, int depth) {
  if (err <= tol || depth == 0) return whole;
  const double m = 0.5 * (a + b);
  double el, er;
  const double left = gk15(f, a, m, el);
  const double right = gk15(f, m, b, er);
  return adaptive(f, a, m, left, el, 0.5 * tol, depth - 1) +
         adaptive(f, m, b, right, er, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (7/15) quadrature of f over [a, b].
template <class F>
double integrate(F f, double a, double b, double abs_tol = 1e-14, int max_depth = 30) {
  if (!(b >= a)) throw std::invalid_argument("integrate: need a <= b");
  double err;
  const double whole = detail::gk15(f, a, b, err);
  return detail::adaptive(f, a, b, whole, err, abs_tol, max_depth);
}

}  // namespace gkdv
