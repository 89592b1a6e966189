#include "gkdv/solver.hpp"

#include "gkdv/fft.hpp"
#include "gkdv/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace gkdv {

namespace {

constexpr double kBlowUpFactor = 1e6;
constexpr double kContaminationRatio = 1e-8;
constexpr double kResolutionTolerance = 1e-8;
constexpr double kEdgeFraction = 0.02;

}  // namespace

double boundary_ratio(const Field& u) {
  const double peak = u.max_abs();
  if (peak == 0.0) return 0.0;
  const double L = u.grid.half_width();
  const auto& x = u.grid.x();
  double edge = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (std::abs(x(i)) >= (1.0 - kEdgeFraction) * L) edge = std::max(edge, std::abs(u.values(i)));
  }
  return edge / peak;
}

void SolverConfig::validate(const Grid& grid) const {
  if (k < 1) throw std::invalid_argument("solver: k must be an integer >= 1");
  if (!(dt != 0.0) || !std::isfinite(dt)) throw std::invalid_argument("solver: dt must be finite and nonzero");
  if (sponge) {
    if (!(sponge->width > 0.0) || !(sponge->width < grid.half_width() / 4.0))
      throw std::invalid_argument("solver: sponge width must lie in (0, L/4)");
    if (!(sponge->strength >= 0.0)) throw std::invalid_argument("solver: sponge strength must be >= 0");
  }
  if (conservation_check_interval < 0) throw std::invalid_argument("solver: check interval must be >= 0");
  for (std::size_t i = 1; i < snapshot_times.size(); ++i) {
    const double d = snapshot_times[i] - snapshot_times[i - 1];
    if (!(dt > 0 ? d > 0.0 : d < 0.0))
      throw std::invalid_argument("solver: snapshot times must be strictly monotone in the direction of dt");
  }
}

double default_dt(const Field& u0, int k) {
  return 0.1 * u0.grid.dx() / std::pow(std::max(1.0, u0.max_abs()), k);
}

int dealias_size(int n, int k) { return fft::good_size((n * (k + 2) + 1) / 2); }

Eigen::ArrayXd sponge_profile(const Grid& grid, double width, double strength) {
  const double L = grid.half_width();
  const auto& x = grid.x();
  Eigen::ArrayXd p(grid.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double s = (std::abs(x(i)) - (L - width)) / width;
    if (s <= 0.0) {
      p(i) = 0.0;
    } else {
      const double r = std::min(s, 1.0);
      p(i) = strength * r * r * r * (10.0 + r * (-15.0 + 6.0 * r));
    }
  }
  return p;
}

ConservationSample conserved_quantities(const Field& u, int k) {
  ConservationSample s;
  s.t = u.t;
  s.mass = integral(u);
  s.l2sq = integral(u.values.square(), u.grid);
  const Field ux = derivative(u, 1);
  const double kk = static_cast<double>(k);
  s.hamiltonian = integral(0.5 * ux.values.square() - u.values.pow(k + 2) / ((kk + 1.0) * (kk + 2.0)), u.grid);
  return s;
}

Stepper::Stepper(const Grid& grid, const SolverConfig& cfg)
    : grid_(grid), cfg_(cfg), padded_(cfg.dealias ? dealias_size(grid.size(), cfg.k) : grid.size()) {
  phases(cfg.dt, full_, half_);
  if (cfg.sponge) damping_profile_ = sponge_profile(grid, cfg.sponge->width, cfg.sponge->strength);
}

void Stepper::phases(double h, Eigen::ArrayXcd& full, Eigen::ArrayXcd& half) const {
  const auto& xi = grid_.wavenumbers();
  full.resize(xi.size());
  half.resize(xi.size());
  for (Eigen::Index j = 0; j < xi.size(); ++j) {
    const double w = xi(j) * xi(j) * xi(j);
    full(j) = std::polar(1.0, w * h);
    half(j) = std::polar(1.0, 0.5 * w * h);
  }
}

void Stepper::nonlinear_term(const Eigen::ArrayXcd& in, Eigen::ArrayXcd& out) {
  const int n = grid_.size();
  const int nyq = n / 2;
  const int m = padded_;
  pad_spec_.setZero(m / 2 + 1);
  pad_spec_.head(nyq) = in.head(nyq) * (static_cast<double>(m) / n);
  fft::inverse(pad_spec_, m, pad_phys_);
  Eigen::ArrayXd power = pad_phys_;
  for (int p = 0; p < cfg_.k; ++p) power *= pad_phys_;
  fft::forward(power, pad_spec_);
  const auto& xi = grid_.wavenumbers();
  const std::complex<double> scale(0.0, -1.0 / (cfg_.k + 1.0) * static_cast<double>(n) / m);
  out.resize(nyq + 1);
  for (int j = 0; j < nyq; ++j) out(j) = scale * xi(j) * pad_spec_(j);
  out(nyq) = 0.0;
}

void Stepper::advance(Eigen::ArrayXcd& v, std::optional<double> step_size) {
  const double h = step_size.value_or(cfg_.dt);
  Eigen::ArrayXcd local_full, local_half;
  const Eigen::ArrayXcd* E = &full_;
  const Eigen::ArrayXcd* Eh = &half_;
  if (h != cfg_.dt) {
    phases(h, local_full, local_half);
    E = &local_full;
    Eh = &local_half;
  }
  if (!cfg_.nonlinear) {
    v *= *E;
    return;
  }
  nonlinear_term(v, k1_);
  stage_ = *Eh * (v + 0.5 * h * k1_);
  nonlinear_term(stage_, k2_);
  stage_ = *Eh * v + 0.5 * h * k2_;
  nonlinear_term(stage_, k3_);
  stage_ = *E * v + h * (*Eh * k3_);
  nonlinear_term(stage_, k4_);
  v = *E * v + (h / 6.0) * (*E * k1_ + 2.0 * (*Eh * (k2_ + k3_)) + k4_);
}

void Stepper::apply_sponge(Eigen::ArrayXcd& coeffs, double h) {
  if (!cfg_.sponge || cfg_.sponge->strength == 0.0) return;
  Eigen::ArrayXd u;
  fft::inverse(coeffs, grid_.size(), u);
  u *= (-damping_profile_ * std::abs(h)).exp();
  fft::forward(u, coeffs);
  coeffs(coeffs.size() - 1) = 0.0;
}

SpectralField step(const SpectralField& state, const SolverConfig& cfg) {
  if (!state.coeffs.allFinite()) throw std::invalid_argument("step: state is not finite");
  Stepper stepper(state.grid, cfg);
  SpectralField out = state;
  out.coeffs(out.coeffs.size() - 1) = 0.0;
  stepper.advance(out.coeffs);
  stepper.apply_sponge(out.coeffs, cfg.dt);
  out.t = state.t + cfg.dt;
  if (!out.coeffs.allFinite()) throw std::runtime_error("step: blow-up (non-finite state)");
  return out;
}

Field reflect(const Field& u) {
  const int n = u.grid.size();
  Eigen::ArrayXd v(n);
  for (int i = 0; i < n; ++i) v(i) = u.values((n - i) % n);
  return Field(u.grid, std::move(v), u.t);
}

Trajectory evolve(const Field& u0, const SolverConfig& cfg) {
  cfg.validate(u0.grid);
  if (!u0.all_finite()) throw std::invalid_argument("evolve: initial data is not finite");

  if (cfg.dt < 0.0) {
    // u(x, t) -> u(-x, -t) maps the equation to itself.
    SolverConfig fwd = cfg;
    fwd.dt = -cfg.dt;
    for (double& s : fwd.snapshot_times) s = -s;
    Field w0 = reflect(u0);
    w0.t = -u0.t;
    Trajectory tr = evolve(w0, fwd);
    tr.config = cfg;
    for (Field& f : tr.snapshots) {
      f = reflect(f);
      f.t = -f.t;
    }
    for (auto& c : tr.conservation) c.t = -c.t;
    if (tr.flags.blow_up) tr.flags.blow_up_time = -tr.flags.blow_up_time;
    return tr;
  }

  Trajectory tr;
  tr.config = cfg;
  const Grid& grid = u0.grid;
  const double u0_peak = u0.max_abs();
  const bool sponge_on = cfg.sponge && cfg.sponge->strength > 0.0;
  // Rough data keep their own spectral tail; only growth beyond it counts.
  tr.flags.datum_tail_ratio = spectral_tail_ratio(u0);
  const double tail_limit = std::max(kResolutionTolerance, 2.0 * tr.flags.datum_tail_ratio);

  Stepper stepper(grid, cfg);
  SpectralField state = to_spectral(u0);
  state.coeffs(state.coeffs.size() - 1) = 0.0;
  double t = u0.t;

  // Returns false on blow-up.
  auto observe = [&](bool snapshot) {
    if (!state.coeffs.allFinite()) return false;
    Field u = to_physical(SpectralField{grid, state.coeffs, t});
    if (!u.all_finite() || (u0_peak > 0.0 && u.max_abs() > kBlowUpFactor * u0_peak)) return false;
    tr.conservation.push_back(conserved_quantities(u, cfg.k));
    if (!sponge_on) {
      const double r = boundary_ratio(u);
      tr.flags.max_edge_ratio = std::max(tr.flags.max_edge_ratio, r);
      if (r > kContaminationRatio) tr.flags.boundary_contamination = true;
    }
    if (snapshot) {
      const double tail = spectral_tail_ratio(u);
      tr.flags.max_tail_ratio = std::max(tr.flags.max_tail_ratio, tail);
      if (tail > tail_limit) tr.flags.under_resolved = true;
      tr.snapshots.push_back(std::move(u));
    }
    return true;
  };
  auto fail = [&] {
    tr.flags.blow_up = true;
    tr.flags.blow_up_time = t;
  };

  long steps = 0;
  const int interval = cfg.conservation_check_interval;
  auto one_step = [&](std::optional<double> h) {
    const double size = h.value_or(cfg.dt);
    stepper.advance(state.coeffs, h);
    if (sponge_on) stepper.apply_sponge(state.coeffs, size);
    ++steps;
    if (!state.coeffs.allFinite()) return false;
    return true;
  };

  for (double target : cfg.snapshot_times) {
    if (target < t - 1e-12 * std::max(1.0, std::abs(t)))
      throw std::invalid_argument("evolve: snapshot time precedes the start time");
    const double start = t;
    const long full = static_cast<long>(std::floor((target - start) / cfg.dt + 1e-9));
    for (long s = 1; s <= full; ++s) {
      if (!one_step(std::nullopt)) {
        t = start + s * cfg.dt;
        fail();
        return tr;
      }
      t = start + s * cfg.dt;
      if (interval > 0 && steps % interval == 0 && !observe(false)) {
        fail();
        return tr;
      }
    }
    const double rest = target - t;
    if (rest > 1e-12 * std::abs(cfg.dt)) {
      if (!one_step(rest)) {
        fail();
        return tr;
      }
    }
    t = target;
    if (!observe(true)) {
      fail();
      return tr;
    }
  }
  return tr;
}

}  // namespace gkdv
