#include "gkdv/airy.hpp"

#include "gkdv/quadrature.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace gkdv {

namespace {

// Ai(0) = 3^{-2/3}/Gamma(2/3) and -Ai'(0) = 3^{-1/3}/Gamma(1/3).
constexpr long double kAi0 = 0.355028053887817239260063186004183558L;
constexpr long double kMinusAiPrime0 = 0.258819403792806798405183560189203963L;

constexpr double kSeriesUpper = 5.0;
constexpr double kAsymptotic = 8.0;

struct Pair {
  double value, slope;
};

// Kahan-compensated accumulator.
struct Compensated {
  long double sum = 0.0L, carry = 0.0L;
  void add(long double v) {
    const long double y = v - carry;
    const long double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

Pair maclaurin(double xd) {
  const long double x = xd, x3 = x * x * x;
  Compensated f, g, fp, gp;
  long double tf = 1.0L, tg = x, tfp = x * x / 2.0L, tgp = 1.0L;
  f.add(tf);
  g.add(tg);
  fp.add(tfp);
  gp.add(tgp);
  for (int k = 1; k < 200; ++k) {
    tf *= x3 / ((3.0L * k - 1) * (3.0L * k));
    tg *= x3 / ((3.0L * k) * (3.0L * k + 1));
    tgp *= x3 / ((3.0L * k - 2) * (3.0L * k));
    if (k > 1) tfp *= x3 / ((3.0L * k - 3) * (3.0L * k - 1));
    f.add(tf);
    g.add(tg);
    gp.add(tgp);
    if (k > 1) fp.add(tfp);
    const long double scale = std::abs(f.sum) + std::abs(g.sum) + 1e-300L;
    if (std::abs(tf) + std::abs(tg) + std::abs(tfp) + std::abs(tgp) < 1e-22L * scale) break;
  }
  return {static_cast<double>(kAi0 * f.sum - kMinusAiPrime0 * g.sum),
          static_cast<double>(kAi0 * fp.sum - kMinusAiPrime0 * gp.sum)};
}

// Coefficients u_k of the Airy asymptotic expansions; v_k = -(6k+1)/(6k-1) u_k.
double u_coeff(int k) {
  double u = 1.0;
  for (int j = 1; j <= k; ++j)
    u *= (6.0 * j - 5) * (6.0 * j - 3) * (6.0 * j - 1) / ((2.0 * j - 1) * 216.0 * j);
  return u;
}
double v_coeff(int k) { return k == 0 ? 1.0 : -(6.0 * k + 1) / (6.0 * k - 1) * u_coeff(k); }

// Sums sum_k sign^k c(k) z^{-k} over k = first, first+step, ... truncated at the
// smallest term.
template <class C>
double asymptotic_sum(C coeff, double zeta, int first, int step, double sign_per_step) {
  double sum = 0.0, prev = std::numeric_limits<double>::infinity(), sign = 1.0;
  for (int k = first; k < 200; k += step) {
    const double term = sign * coeff(k) * std::pow(zeta, -k);
    if (std::abs(term) >= prev) break;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    prev = std::abs(term);
    sign *= sign_per_step;
  }
  return sum;
}

Pair asymptotic_positive(double x) {
  const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
  const double e = std::exp(-zeta);
  if (e == 0.0) return {0.0, -0.0};
  const double q = std::sqrt(std::sqrt(x));
  const double pre = e / (2.0 * std::sqrt(std::numbers::pi));
  const double s = asymptotic_sum(u_coeff, zeta, 0, 1, -1.0);
  const double sp = asymptotic_sum(v_coeff, zeta, 0, 1, -1.0);
  return {pre / q * s, -pre * q * sp};
}

Pair asymptotic_negative(double x) {
  const double z = -x;
  const double zeta = 2.0 / 3.0 * z * std::sqrt(z);
  const double q = std::sqrt(std::sqrt(z));
  const double ph = zeta - 0.25 * std::numbers::pi;
  const double c = std::cos(ph), s = std::sin(ph);
  const double rp = 1.0 / std::sqrt(std::numbers::pi);
  const double p_even = asymptotic_sum(u_coeff, zeta, 0, 2, -1.0);
  const double p_odd = asymptotic_sum(u_coeff, zeta, 1, 2, -1.0);
  const double d_even = asymptotic_sum(v_coeff, zeta, 0, 2, -1.0);
  const double d_odd = asymptotic_sum(v_coeff, zeta, 1, 2, -1.0);
  return {rp / q * (c * p_even + s * p_odd), rp * q * (s * d_even - c * d_odd)};
}

// Taylor re-expansion of y'' = x y about x0 = 8 seeded by the asymptotic
// values; stable for decreasing x because Ai grows in that direction.
Pair taylor_from_eight(double x) {
  const Pair seed = asymptotic_positive(kAsymptotic);
  const double h = x - kAsymptotic;
  double cm1 = 0.0, c0 = seed.value, c1 = seed.slope;
  double value = c0 + c1 * h, slope = c1;
  double hp = h;  // h^{m+1}
  for (int m = 0; m < 120; ++m) {
    const double c2 = (kAsymptotic * c0 + cm1) / ((m + 2.0) * (m + 1.0));
    slope += (m + 2.0) * c2 * hp;
    hp *= h;
    const double term = c2 * hp;
    value += term;
    if (m > 8 && std::abs(term) < 1e-18 * std::abs(value)) break;
    cm1 = c0;
    c0 = c1;
    c1 = c2;
  }
  return {value, slope};
}

Pair evaluate(double x) {
  if (std::isnan(x)) return {x, x};
  if (x < -kAsymptotic) return asymptotic_negative(x);
  if (x <= kSeriesUpper) return maclaurin(x);
  if (x < kAsymptotic) return taylor_from_eight(x);
  return asymptotic_positive(x);
}

}  // namespace

double airy(double x) { return evaluate(x).value; }

double airy_prime(double x) { return evaluate(x).slope; }

double airy_by_quadrature(double x) {
  if (!(x > 0.0)) throw std::domain_error("airy_by_quadrature needs x > 0");
  const double r = std::sqrt(x);
  const double upper = std::sqrt(60.0 / r);
  const double body = integrate([r](double s) { return std::exp(-r * s * s) * std::cos(s * s * s / 3.0); },
                                0.0, upper, 1e-16);
  return std::exp(-2.0 / 3.0 * x * r) / std::numbers::pi * body;
}

}  // namespace gkdv
