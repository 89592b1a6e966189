#pragma once

#include "gkdv/field.hpp"

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gkdv {

enum class TimeDirection { forward, backward };

/// Time-decaying rate a(t) = a0 / (1 + 27 a0^2 t / 4)^{1/2}, the solution of
/// a' + (27/8) a^3 = 0 with a(0) = a0. Backward schedules evaluate at |t|.
class DecaySchedule {
 public:
  explicit DecaySchedule(double a0, TimeDirection direction = TimeDirection::forward)
      : a0_(a0), direction_(direction) {
    if (!(a0 > 0.0) || !std::isfinite(a0)) throw std::invalid_argument("decay schedule needs a0 > 0");
  }

  double a0() const { return a0_; }
  TimeDirection direction() const { return direction_; }

  template <class T>
  T rate(T t) const {
    const T s = elapsed(t);
    return T(a0_) / std::sqrt(T(1) + T(27) * T(a0_) * T(a0_) * s / T(4));
  }

  /// da/dt from differentiating the closed form. For backward schedules this
  /// is d/dt a(|t|).
  template <class T>
  T rate_derivative(T t) const {
    const T s = elapsed(t);
    const T c = T(27) * T(a0_) * T(a0_) / T(4);
    const T q = T(1) + c * s;
    const T d = -T(a0_) * c / (T(2) * q * std::sqrt(q));
    return (direction_ == TimeDirection::backward && t < T(0)) ? -d : d;
  }

 private:
  template <class T>
  T elapsed(T t) const {
    if (direction_ == TimeDirection::backward) return std::abs(t);
    if (t < T(0)) throw std::domain_error("forward decay schedule evaluated at negative time");
    return t;
  }

  double a0_;
  TimeDirection direction_;
};

template <class T>
T decay_rate_a(const DecaySchedule& s, T t) {
  return s.rate(t);
}

// Bridge polynomial theta(x) = 1/4 + 15/8 x^3 - 12/8 x^4 + 3/8 x^5 on [0, 1].
// It matches the constant 1/4 at 0 and x^{3/2} at 1 up to second order.

template <class T>
T theta_derivative(T x, int order) {
  if (x < T(0) || x > T(1)) throw std::domain_error("theta is defined on [0, 1]");
  const T x2 = x * x;
  switch (order) {
    case 0: return T(1) / T(4) + x2 * x * (T(15) / T(8) + x * (T(-12) / T(8) + x * T(3) / T(8)));
    case 1: return x2 * (T(45) / T(8) + x * (T(-48) / T(8) + x * T(15) / T(8)));
    case 2: return x * (T(90) / T(8) + x * (T(-144) / T(8) + x * T(60) / T(8)));
    case 3: return T(90) / T(8) + x * (T(-288) / T(8) + x * T(180) / T(8));
    default: throw std::invalid_argument("theta derivative order must be 0..3");
  }
}

template <class T>
T theta(T x) {
  return theta_derivative(x, 0);
}

/// Value and first three x-derivatives plus the t-derivative of a weight.
template <class T>
struct WeightJet {
  T value{}, dx{}, dxx{}, dxxx{}, dt{};
};

/// Quadratic continuation P2(x, t) of exp(a(t) x^{3/2}) beyond x = N.
template <class T>
WeightJet<T> p2_jet(T x, T t, int N, const DecaySchedule& sched) {
  if (N < 1) throw std::invalid_argument("P2 needs N >= 1");
  if (x < T(N)) throw std::domain_error("P2 is defined for x >= N");
  const T a = sched.rate(t);
  const T da = sched.rate_derivative(t);
  const T n = T(N), rn = std::sqrt(n), n32 = n * rn;
  const T e = std::exp(a * n32);
  const T s = T(1.5) * a * rn;
  const T q = s * s + T(0.75) * a / rn;
  const T ds = T(1.5) * da * rn;
  const T dq = T(2) * s * ds + T(0.75) * da / rn;
  const T y = x - n;
  WeightJet<T> j;
  j.value = e * (T(1) + s * y + q * y * y / T(2));
  j.dx = e * (s + q * y);
  j.dxx = e * q;
  j.dxxx = T(0);
  j.dt = da * n32 * j.value + e * (ds * y + dq * y * y / T(2));
  return j;
}

template <class T>
T p2(T x, T t, int N, const DecaySchedule& sched) {
  return p2_jet(x, t, N, sched).value;
}

template <class T>
T p2_dx(T x, T t, int N, const DecaySchedule& sched) {
  return p2_jet(x, t, N, sched).dx;
}

/// Four-branch weight phi_N(x, t):
///   exp(a/4)            x <= 0
///   exp(a theta(x))     0 <= x <= 1
///   exp(a x^{3/2})      1 <= x <= N
///   P2(x, t)            x >= N
/// It is C^2 in x and nondecreasing.
template <class T>
WeightJet<T> phi_piecewise_jet(T x, T t, int N, const DecaySchedule& sched) {
  if (N < 1) throw std::invalid_argument("phi_N needs N >= 1");
  if (x >= T(N)) return p2_jet(x, t, N, sched);
  const T a = sched.rate(t);
  const T da = sched.rate_derivative(t);
  // log phi = a * g(x) on the first three branches.
  T g, g1 = 0, g2 = 0, g3 = 0;
  if (x <= T(0)) {
    g = T(0.25);
  } else if (x <= T(1)) {
    g = theta_derivative(x, 0);
    g1 = theta_derivative(x, 1);
    g2 = theta_derivative(x, 2);
    g3 = theta_derivative(x, 3);
  } else {
    const T r = std::sqrt(x);
    g = x * r;
    g1 = T(1.5) * r;
    g2 = T(0.75) / r;
    g3 = T(-0.375) / (x * r);
  }
  const T l1 = a * g1, l2 = a * g2, l3 = a * g3;
  WeightJet<T> j;
  j.value = std::exp(a * g);
  j.dx = l1 * j.value;
  j.dxx = (l2 + l1 * l1) * j.value;
  j.dxxx = (l3 + T(3) * l1 * l2 + l1 * l1 * l1) * j.value;
  j.dt = da * g * j.value;
  return j;
}

template <class T>
T phi_piecewise(T x, T t, int N, const DecaySchedule& sched) {
  return phi_piecewise_jet(x, t, N, sched).value;
}

/// log phi_N(x, t), finite where phi_N itself would overflow.
template <class T>
T log_phi_piecewise(T x, T t, int N, const DecaySchedule& sched) {
  if (N < 1) throw std::invalid_argument("phi_N needs N >= 1");
  const T a = sched.rate(t);
  if (x <= T(0)) return a / T(4);
  if (x <= T(1)) return a * theta(x);
  if (x <= T(N)) return a * x * std::sqrt(x);
  const T n = T(N), rn = std::sqrt(n);
  const T s = T(1.5) * a * rn;
  const T q = s * s + T(0.75) * a / rn;
  const T y = x - n;
  return a * n * rn + std::log1p(s * y + q * y * y / T(2));
}

enum class Parity { odd, even };

/// Truncated polynomial weight of the decay-regularity argument:
///   (1 + x^4)^{alpha/2} - 1   on [0, N],
///   (2N)^{2 alpha}            on [N + l, inf), l <= 9N,
/// joined on (N, N + l) by integrating the inner derivative times a C^2
/// cutoff that falls from 1 to 0. The result is C^3 and nondecreasing; l is
/// chosen so the bridge lands on the plateau. Pairs for which no l <= 9N
/// reaches it are rejected. Extended to x < 0 with the given parity.
class TruncatedWeight {
 public:
  TruncatedWeight(int N, double alpha);

  int N() const { return N_; }
  double alpha() const { return alpha_; }
  double sup() const { return top_; }
  double ramp_length() const { return ramp_; }

  double value(double x, Parity parity) const { return derivative(x, 0, parity); }
  double derivative(double x, int order, Parity parity) const;

 private:
  double half_line(double x, int order) const;

  int N_;
  double alpha_;
  double top_;
  double ramp_ = 0.0;  // bridge length l
};

enum class WeightKind {
  unit,
  frac_exp_plus,
  frac_exp_minus,
  exp_linear,
  poly_bracket,
  phiN_piecewise,
  truncated_odd,
  truncated_even,
  airy_envelope,
};

std::string_view to_string(WeightKind k);
WeightKind weight_kind_from_string(std::string_view s);

/// One weight family with its parameters. `scheduled` selects a(t) instead of
/// the frozen a0 for the fractional-exponential kinds and phi_N.
struct WeightSpec {
  WeightKind kind = WeightKind::unit;
  double a0 = 1.0;
  double beta = 0.0;
  double alpha = 0.5;
  double airy_c = 2.0 / 3.0;
  int N = 8;
  bool scheduled = false;
  TimeDirection direction = TimeDirection::forward;

  /// Throws std::invalid_argument when a required parameter is out of range.
  void validate() const;
  bool depends_on_time() const;
  DecaySchedule schedule() const { return DecaySchedule(a0, direction); }
  double rate(double t) const { return scheduled ? schedule().rate(t) : a0; }
};

/// w(x, t). Nonnegative for every kind except truncated_odd, which is odd in x.
double evaluate_weight(const WeightSpec& spec, double x, double t);

/// log w(x, t) evaluated without forming w. Throws for truncated_odd.
double log_weight(const WeightSpec& spec, double x, double t);

struct WeightedNorm {
  double value = 0.0;      // sqrt(int w |u|^2 dx); +inf when saturated
  double log_value = 0.0;  // log of value, finite even when value overflows
  double floored_fraction = 0.0;
  bool saturated = false;
};

/// Samples with |u| below this floor are dropped from weighted integrals.
inline constexpr double kUnderflowFloor = 1e-300;

/// Restricts weighted integrals to lo <= x <= hi.
struct ObservationWindow {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double x) const { return x >= lo && x <= hi; }
};

/// sqrt(sum_i w(x_i, t) u_i^2 dx) accumulated in log space, over the samples
/// inside `window`.
WeightedNorm log_weighted_l2(const Field& u, const WeightSpec& spec, double t, ObservationWindow window = {});
inline WeightedNorm log_weighted_l2(const Field& u, const WeightSpec& spec) {
  return log_weighted_l2(u, spec, u.t);
}

/// Weight sampled on a grid (direct evaluation, may overflow to inf).
Eigen::ArrayXd sample_weight(const WeightSpec& spec, const Grid& grid, double t);

}  // namespace gkdv
