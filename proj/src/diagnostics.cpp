#include "gkdv/diagnostics.hpp"

#include "gkdv/spectral.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gkdv {

std::vector<WeightedSample> weighted_series(const Trajectory& traj, const WeightSpec& spec,
                                            ObservationWindow window) {
  std::vector<WeightedSample> out;
  out.reserve(traj.snapshots.size());
  for (const Field& u : traj.snapshots) out.push_back({u.t, log_weighted_l2(u, spec, u.t, window)});
  return out;
}

namespace {

struct LineFit {
  double slope, intercept, rms;
};

LineFit least_squares(const std::vector<double>& X, const std::vector<double>& Y) {
  const Eigen::Index n = static_cast<Eigen::Index>(X.size());
  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    A(i, 0) = 1.0;
    A(i, 1) = X[i];
    b(i) = Y[i];
  }
  const Eigen::Vector2d c = A.colPivHouseholderQr().solve(b);
  const double rms = std::sqrt((A * c - b).squaredNorm() / n);
  return {c(1), c(0), rms};
}

}  // namespace

TailFit fit_tail(const Field& u, TailModel model, TailWindow window) {
  if (!(window.x_lo < window.x_hi)) throw std::invalid_argument("fit_tail: empty window");
  const double peak = u.max_abs();
  const double floor = kTailFitFloor * peak;
  const auto& x = u.grid.x();
  const auto& v = u.values;
  const Eigen::Index n = v.size();
  const double dx = u.grid.dx();

  std::vector<double> X, Y;
  if (model == TailModel::frac_exp) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (x(i) < window.x_lo || x(i) > window.x_hi) continue;
      const double a = std::abs(v(i));
      if (a <= floor || a == 0.0) continue;
      const double r = std::abs(x(i) - window.origin);
      X.push_back(r * std::sqrt(r));
      Y.push_back(std::log(a));
    }
  } else {
    // Local maxima of |u|, refined by a parabola through three samples.
    for (Eigen::Index i = 1; i + 1 < n; ++i) {
      if (x(i) < window.x_lo || x(i) > window.x_hi) continue;
      const double l = std::abs(v(i - 1)), c = std::abs(v(i)), r = std::abs(v(i + 1));
      if (!(c >= l && c > r) || c <= floor) continue;
      const double curv = l - 2.0 * c + r;
      double peak_val = c, peak_x = x(i);
      if (curv < 0.0) {
        const double off = 0.5 * (l - r) / curv;
        peak_x = x(i) + off * dx;
        peak_val = c - 0.125 * (r - l) * (r - l) / curv;
      }
      if (peak_x == window.origin) continue;
      X.push_back(std::log(std::abs(peak_x - window.origin)));
      Y.push_back(std::log(peak_val));
    }
  }
  if (static_cast<int>(X.size()) < kMinTailSamples)
    throw std::domain_error("fit_tail: only " + std::to_string(X.size()) + " usable samples in window");
  const auto [mn, mx] = std::minmax_element(X.begin(), X.end());
  if (*mx - *mn <= 1e-12 * std::max(1.0, std::abs(*mx))) throw std::domain_error("fit_tail: degenerate abscissae");

  const LineFit f = least_squares(X, Y);
  TailFit out;
  out.window = window;
  out.model = model;
  out.rate = -f.slope;
  out.log_c = f.intercept;
  out.residual_rms = f.rms;
  out.samples = static_cast<int>(X.size());
  return out;
}

TailWindow right_tail_window(const Field& u, double elapsed, double limit) {
  const auto& x = u.grid.x();
  const Eigen::ArrayXd a = u.values.abs();
  Eigen::Index ipeak;
  const double peak = a.maxCoeff(&ipeak);
  if (peak == 0.0) throw std::domain_error("right_tail_window: zero field");
  const Eigen::Index n = a.size();

  double lo = 2.0 * std::cbrt(3.0 * std::abs(elapsed));
  Eigen::Index i = std::max<Eigen::Index>(ipeak, 0);
  while (i < n && a(i) >= 0.01 * peak) ++i;
  if (i < n) lo = std::max(lo, x(i));
  lo = std::max(lo, 0.0);

  double hi = -std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < n; ++j) {
    if (x(j) > lo && x(j) <= limit && a(j) > 1e-10 * peak) hi = x(j);
  }
  if (!(hi > lo)) throw std::domain_error("right_tail_window: empty window");
  return {lo, hi};
}

PersistenceAudit persistence_audit(const Trajectory& traj, double beta, double line_tolerance) {
  if (!(beta > 0.0)) throw std::invalid_argument("persistence_audit: beta must be positive");
  if (traj.snapshots.size() < 2) throw std::invalid_argument("persistence_audit: need at least two snapshots");
  PersistenceAudit out;
  out.beta = beta;
  WeightSpec w;
  w.kind = WeightKind::exp_linear;
  w.beta = 2.0 * beta;  // ||e^{bx} u||^2 = int e^{2bx} u^2

  const double t0 = traj.snapshots.front().t;
  std::vector<double> logs, grads;
  for (const Field& u : traj.snapshots) {
    const WeightedNorm n = log_weighted_l2(u, w, u.t);
    const WeightedNorm d = log_weighted_l2(derivative(u, 1), w, u.t);
    out.saturated = out.saturated || n.saturated || d.saturated;
    out.times.push_back(u.t - t0);
    out.norms.push_back(n.value);
    logs.push_back(n.log_value);
    grads.push_back(d.value * d.value);
  }
  if (out.saturated) return out;
  if (out.norms.front() == 0.0) {
    // Zero datum: every quantity vanishes.
    out.below_line = true;
    out.pass = true;
    return out;
  }
  const LineFit f = least_squares(out.times, logs);
  out.growth = f.slope;
  out.max_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < logs.size(); ++i)
    out.max_excess = std::max(out.max_excess, logs[i] - (out.growth * out.times[i] + logs.front()));
  out.below_line = out.max_excess <= std::log1p(line_tolerance);

  for (std::size_t i = 1; i < out.times.size(); ++i) {
    const double a = std::exp(-out.growth * out.times[i - 1]) * grads[i - 1];
    const double b = std::exp(-out.growth * out.times[i]) * grads[i];
    out.smoothing += 0.5 * (a + b) * (out.times[i] - out.times[i - 1]);
  }
  out.bound = out.norms.front() * out.norms.front() / (4.0 * beta);
  out.pass = out.below_line && out.smoothing <= out.bound && std::isfinite(out.smoothing);
  return out;
}

InterpolationCheck interpolation_check(const Field& f, double a, double b, double theta) {
  if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("interpolation_check: a and b must be positive");
  if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("interpolation_check: theta must lie in (0, 1)");
  const Eigen::ArrayXd bracket = (1.0 + f.grid.x().square()).sqrt();
  const Field inner(f.grid, bracket.pow((1.0 - theta) * b) * f.values, f.t);
  const Field outer(f.grid, bracket.pow(b) * f.values, f.t);
  InterpolationCheck out;
  out.lhs = l2_norm(bessel_potential(inner, theta * a));
  out.rhs_product = std::pow(l2_norm(outer), 1.0 - theta) * std::pow(sobolev_norm(f, a), theta);
  if (!std::isfinite(out.lhs) || !std::isfinite(out.rhs_product))
    throw std::domain_error("interpolation_check: saturated norms");
  out.ratio = out.rhs_product > 0.0 ? out.lhs / out.rhs_product : 0.0;
  return out;
}

ConservationReport conserved_audit(const Trajectory& traj, double horizon) {
  ConservationReport r;
  if (traj.conservation.empty()) return r;
  const ConservationSample& c0 = traj.conservation.front();
  auto drift = [](double v, double v0) { return v0 != 0.0 ? std::abs(v / v0 - 1.0) : std::abs(v); };
  double prev = c0.l2sq;
  for (const auto& c : traj.conservation) {
    if (std::abs(c.t - c0.t) > horizon * (1.0 + 1e-12)) continue;
    r.mass_drift = std::max(r.mass_drift, drift(c.mass, c0.mass));
    r.l2_drift = std::max(r.l2_drift, drift(c.l2sq, c0.l2sq));
    r.hamiltonian_drift = std::max(r.hamiltonian_drift, drift(c.hamiltonian, c0.hamiltonian));
    if (c.l2sq > prev * (1.0 + 1e-13)) r.l2_nonincreasing = false;
    prev = c.l2sq;
  }
  return r;
}

std::vector<double> energy_identity_residuals(const Trajectory& traj, int N, const DecaySchedule& sched) {
  const auto& snaps = traj.snapshots;
  std::vector<double> energy;
  for (const Field& u : snaps) {
    const auto& x = u.grid.x();
    double e = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) e += u.values(i) * u.values(i) * phi_piecewise(x(i), u.t, N, sched);
    energy.push_back(e * u.grid.dx());
  }
  std::vector<double> out;
  for (std::size_t s = 1; s + 1 < snaps.size(); ++s) {
    const Field& u = snaps[s];
    const Field ux = derivative(u, 1);
    const auto& x = u.grid.x();
    double flux = 0.0, source = 0.0, cubic = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const auto j = phi_piecewise_jet(x(i), u.t, N, sched);
      const double v = u.values(i);
      flux += ux.values(i) * ux.values(i) * j.dx;
      source += v * v * (j.dxxx + j.dt);
      cubic += v * v * v * j.dx;
    }
    const double dx = u.grid.dx();
    const double dEdt = (energy[s + 1] - energy[s - 1]) / (snaps[s + 1].t - snaps[s - 1].t);
    out.push_back(dEdt + 3.0 * flux * dx - source * dx - 2.0 / 3.0 * cubic * dx);
  }
  return out;
}

void record_series(Trajectory& traj, const std::string& name, const std::vector<WeightedSample>& series) {
  for (const auto& s : series) {
    std::string flags;
    if (s.norm.saturated) flags = "saturated";
    if (s.norm.floored_fraction > 0.0) flags += flags.empty() ? "floored" : "|floored";
    traj.rows.push_back({s.t, name, s.norm.value, flags});
  }
}

}  // namespace gkdv
