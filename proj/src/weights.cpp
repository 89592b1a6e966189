#include "gkdv/weights.hpp"

#include "gkdv/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace gkdv {

namespace {

// Derivatives of (1 + x^4)^{alpha/2} - 1 for x >= 0.
double inner_truncated(double x, int order, double alpha) {
  const double q = 1.0 + x * x * x * x;
  const double m = 0.5 * alpha - 1.0;
  switch (order) {
    case 0: return std::pow(q, 0.5 * alpha) - 1.0;
    case 1: return 2.0 * alpha * x * x * x * std::pow(q, m);
    case 2: {
      const double x2 = x * x;
      return 2.0 * alpha * (3.0 * x2 * std::pow(q, m) + 4.0 * m * x2 * x2 * x2 * std::pow(q, m - 1.0));
    }
    case 3: {
      const double x5 = x * x * x * x * x;
      return 2.0 * alpha *
             (6.0 * x * std::pow(q, m) + 36.0 * m * x5 * std::pow(q, m - 1.0) +
              16.0 * m * (m - 1.0) * x5 * x * x * x * x * std::pow(q, m - 2.0));
    }
    default: throw std::invalid_argument("truncated weight derivative order must be 0..3");
  }
}

// 1 - smoothstep: C^2 cutoff from 1 at s = 0 to 0 at s = 1, flat at both ends.
double cutoff(double s, int order) {
  if (s <= 0.0) return order == 0 ? 1.0 : 0.0;
  if (s >= 1.0) return 0.0;
  const double r = 1.0 - s;
  switch (order) {
    case 0: return 1.0 - s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
    case 1: return -30.0 * s * s * r * r;
    case 2: return -60.0 * s * r * (1.0 - 2.0 * s);
    default: throw std::invalid_argument("cutoff derivative order must be 0..2");
  }
}

}  // namespace

TruncatedWeight::TruncatedWeight(int N, double alpha) : N_(N), alpha_(alpha) {
  if (N < 1) throw std::invalid_argument("truncated weight needs N >= 1");
  if (!(alpha > 0.0)) throw std::invalid_argument("truncated weight needs alpha > 0");
  top_ = std::pow(2.0 * N, 2.0 * alpha);
  const double gap = top_ - inner_truncated(N, 0, alpha);

  // The rise over a ramp of length l grows with l; pick l so it equals gap.
  auto rise = [&](double l) {
    return integrate([&](double y) { return inner_truncated(y, 1, alpha) * cutoff((y - N) / l, 0); },
                           static_cast<double>(N), N + l, 1e-13 * top_);
  };
  double lo = 0.0, hi = 9.0 * N;
  if (!(rise(hi) >= gap)) {
    throw std::domain_error("truncated weight bridge is not monotone for N = " + std::to_string(N) +
                            ", alpha = " + std::to_string(alpha));
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (rise(mid) < gap ? lo : hi) = mid;
  }
  ramp_ = hi;
}

double TruncatedWeight::half_line(double x, int order) const {
  if (x <= N_) return inner_truncated(x, order, alpha_);
  if (x >= N_ + ramp_) return order == 0 ? top_ : 0.0;
  const double s = (x - N_) / ramp_;
  const double l = ramp_;
  switch (order) {
    case 0: {
      // Rise accumulated so far; the plateau value absorbs the bisection residue at the far end.
      const double done = integrate(
          [&](double y) { return inner_truncated(y, 1, alpha_) * cutoff((y - N_) / l, 0); },
          static_cast<double>(N_), x, 1e-13 * top_);
      return std::min(inner_truncated(N_, 0, alpha_) + done, top_);
    }
    case 1: return inner_truncated(x, 1, alpha_) * cutoff(s, 0);
    case 2: return inner_truncated(x, 2, alpha_) * cutoff(s, 0) + inner_truncated(x, 1, alpha_) * cutoff(s, 1) / l;
    default:
      return inner_truncated(x, 3, alpha_) * cutoff(s, 0) + 2.0 * inner_truncated(x, 2, alpha_) * cutoff(s, 1) / l +
             inner_truncated(x, 1, alpha_) * cutoff(s, 2) / (l * l);
  }
}

double TruncatedWeight::derivative(double x, int order, Parity parity) const {
  if (order < 0 || order > 3) throw std::invalid_argument("truncated weight derivative order must be 0..3");
  if (x >= 0.0) return half_line(x, order);
  // f(x) = sign * g(-x)  =>  f^{(k)}(x) = sign * (-1)^k g^{(k)}(-x)
  const double sign = parity == Parity::odd ? -1.0 : 1.0;
  return sign * (order % 2 ? -1.0 : 1.0) * half_line(-x, order);
}

std::string_view to_string(WeightKind k) {
  switch (k) {
    case WeightKind::unit: return "unit";
    case WeightKind::frac_exp_plus: return "frac_exp_plus";
    case WeightKind::frac_exp_minus: return "frac_exp_minus";
    case WeightKind::exp_linear: return "exp_linear";
    case WeightKind::poly_bracket: return "poly_bracket";
    case WeightKind::phiN_piecewise: return "phiN_piecewise";
    case WeightKind::truncated_odd: return "truncated_odd";
    case WeightKind::truncated_even: return "truncated_even";
    case WeightKind::airy_envelope: return "airy_envelope";
  }
  return "unknown";
}

WeightKind weight_kind_from_string(std::string_view s) {
  for (auto k : {WeightKind::unit, WeightKind::frac_exp_plus, WeightKind::frac_exp_minus,
                 WeightKind::exp_linear, WeightKind::poly_bracket, WeightKind::phiN_piecewise,
                 WeightKind::truncated_odd, WeightKind::truncated_even, WeightKind::airy_envelope}) {
    if (to_string(k) == s) return k;
  }
  throw std::invalid_argument("unknown weight kind '" + std::string(s) + "'");
}

void WeightSpec::validate() const {
  switch (kind) {
    case WeightKind::unit: return;
    case WeightKind::frac_exp_plus:
    case WeightKind::frac_exp_minus:
    case WeightKind::phiN_piecewise:
      if (!(a0 > 0.0)) throw std::invalid_argument(std::string(to_string(kind)) + ": a0 must be positive");
      if (kind == WeightKind::phiN_piecewise && N < 1)
        throw std::invalid_argument("phiN_piecewise: N must be a positive integer");
      return;
    case WeightKind::exp_linear:
      if (!(beta > 0.0)) throw std::invalid_argument("exp_linear: beta must be positive");
      return;
    case WeightKind::poly_bracket:
      if (!(alpha > 0.0)) throw std::invalid_argument("poly_bracket: alpha must be positive");
      return;
    case WeightKind::truncated_odd:
    case WeightKind::truncated_even:
      if (!(alpha > 0.0)) throw std::invalid_argument(std::string(to_string(kind)) + ": alpha must be positive");
      if (N < 1) throw std::invalid_argument(std::string(to_string(kind)) + ": N must be a positive integer");
      return;
    case WeightKind::airy_envelope:
      if (!(airy_c > 0.0)) throw std::invalid_argument("airy_envelope: c must be positive");
      return;
  }
}

bool WeightSpec::depends_on_time() const {
  return scheduled && (kind == WeightKind::frac_exp_plus || kind == WeightKind::frac_exp_minus ||
                       kind == WeightKind::phiN_piecewise);
}

double log_weight(const WeightSpec& spec, double x, double t) {
  const double xp = std::max(x, 0.0), xm = std::max(-x, 0.0);
  switch (spec.kind) {
    case WeightKind::unit: return 0.0;
    case WeightKind::frac_exp_plus: return spec.rate(t) * xp * std::sqrt(xp);
    case WeightKind::frac_exp_minus: return spec.rate(t) * xm * std::sqrt(xm);
    case WeightKind::exp_linear: return spec.beta * x;
    case WeightKind::poly_bracket: return spec.alpha * std::log1p(x * x);
    case WeightKind::phiN_piecewise:
      if (spec.scheduled) return log_phi_piecewise(x, t, spec.N, spec.schedule());
      return log_phi_piecewise(x, 0.0, spec.N, DecaySchedule(spec.a0));
    case WeightKind::truncated_even:
      return std::log(TruncatedWeight(spec.N, spec.alpha).value(x, Parity::even));
    case WeightKind::truncated_odd: throw std::invalid_argument("truncated_odd weight has no logarithm");
    case WeightKind::airy_envelope: return -spec.airy_c * xp * std::sqrt(xp) - 0.25 * std::log1p(xm);
  }
  return 0.0;
}

double evaluate_weight(const WeightSpec& spec, double x, double t) {
  spec.validate();
  if (spec.kind == WeightKind::truncated_odd) return TruncatedWeight(spec.N, spec.alpha).value(x, Parity::odd);
  if (spec.kind == WeightKind::truncated_even) return TruncatedWeight(spec.N, spec.alpha).value(x, Parity::even);
  return std::exp(log_weight(spec, x, t));
}

Eigen::ArrayXd sample_weight(const WeightSpec& spec, const Grid& grid, double t) {
  spec.validate();
  const auto& x = grid.x();
  Eigen::ArrayXd w(grid.size());
  if (spec.kind == WeightKind::truncated_odd || spec.kind == WeightKind::truncated_even) {
    const TruncatedWeight tw(spec.N, spec.alpha);
    const Parity p = spec.kind == WeightKind::truncated_odd ? Parity::odd : Parity::even;
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = tw.value(x(i), p);
    return w;
  }
  for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = std::exp(log_weight(spec, x(i), t));
  return w;
}

WeightedNorm log_weighted_l2(const Field& u, const WeightSpec& spec, double t, ObservationWindow window) {
  spec.validate();
  if (spec.kind == WeightKind::truncated_odd)
    throw std::invalid_argument("log_weighted_l2 needs a nonnegative weight");
  const auto& x = u.grid.x();
  const Eigen::Index n = u.values.size();

  Eigen::ArrayXd logs(n);
  Eigen::Index kept = 0, floored = 0;
  const bool truncated = spec.kind == WeightKind::truncated_even;
  const TruncatedWeight* tw = nullptr;
  std::optional<TruncatedWeight> holder;
  if (truncated) tw = &holder.emplace(spec.N, spec.alpha);

  for (Eigen::Index i = 0; i < n; ++i) {
    if (!window.contains(x(i))) continue;
    const double a = std::abs(u.values(i));
    if (!std::isfinite(a)) throw std::domain_error("log_weighted_l2: non-finite sample");
    if (a < kUnderflowFloor) {
      ++floored;
      continue;
    }
    const double lw = truncated ? std::log(tw->value(x(i), Parity::even)) : log_weight(spec, x(i), t);
    if (lw == -std::numeric_limits<double>::infinity()) continue;
    logs(kept++) = lw + 2.0 * std::log(a);
  }

  WeightedNorm out;
  out.floored_fraction = static_cast<double>(floored) / static_cast<double>(n);
  if (kept == 0) {
    out.value = 0.0;
    out.log_value = -std::numeric_limits<double>::infinity();
    return out;
  }
  const auto head = logs.head(kept);
  const double m = head.maxCoeff();
  const double lse = m + std::log((head - m).exp().sum());
  out.log_value = 0.5 * (lse + std::log(u.grid.dx()));
  out.saturated = out.log_value > std::log(std::numeric_limits<double>::max());
  out.value = out.saturated ? std::numeric_limits<double>::infinity() : std::exp(out.log_value);
  return out;
}

}  // namespace gkdv
