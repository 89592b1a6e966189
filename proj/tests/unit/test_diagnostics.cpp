#include "gkdv/analytic.hpp"
#include "gkdv/diagnostics.hpp"
#include "gkdv/spectral.hpp"

#include <doctest.h>

#include <cmath>

using namespace gkdv;

TEST_CASE("weighted series on a conservative run") {
  const Grid g(40, 512);
  SolverConfig c;
  c.dt = 1e-3;
  c.snapshot_times = {0.0, 0.5, 1.0, 1.5};
  const Trajectory tr = evolve(sample_soliton(SolitonSpec{1, 1.0, -5.0}, g), c);
  const auto s = weighted_series(tr, WeightSpec{});
  REQUIRE(s.size() == 4);
  for (const auto& w : s) CHECK(std::abs(w.norm.value / s.front().norm.value - 1.0) <= 1e-10);
}

TEST_CASE("tail fits on synthetic data") {
  const Grid g(40, 8192);
  const Field u = sample([](double x) { return x > 0 ? 5.0 * std::exp(-0.7 * x * std::sqrt(x)) : 5.0; }, g);
  const TailFit f = fit_tail(u, TailModel::frac_exp, {1.0, 8.0});
  CHECK(f.rate == doctest::Approx(0.7).epsilon(1e-6));
  CHECK(f.log_c == doctest::Approx(std::log(5.0)).epsilon(1e-6));
  CHECK(f.residual_rms < 1e-9);

  const Field osc = sample([](double x) { return std::pow(std::abs(x) + 1e-3, -0.25) * std::cos(4 * x); }, g);
  const TailFit p = fit_tail(osc, TailModel::power, {-38.0, -2.0});
  CHECK(p.rate == doctest::Approx(0.25).epsilon(0.08));

  // Relative abscissa.
  const Field shifted = sample([](double x) { return std::pow(std::abs(x + 5) + 1e-3, -0.25) * std::cos(4 * x); }, g);
  CHECK(fit_tail(shifted, TailModel::power, {-38.0, -7.0, -5.0}).rate == doctest::Approx(0.25).epsilon(0.08));

  CHECK_THROWS_AS(fit_tail(u, TailModel::frac_exp, {1.0, 1.02}), std::domain_error);
  CHECK_THROWS_AS(fit_tail(u, TailModel::frac_exp, {3.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(fit_tail(Field::zeros(g), TailModel::frac_exp, {1.0, 8.0}), std::domain_error);
}

TEST_CASE("Airy rate of a linear run") {
  const Grid g(2048, 32768);
  const Field v0 = sample([](double x) { return std::exp(-4 * x * x); }, g);
  const Field v = linear_propagate(v0, 1.0);
  const TailFit f = fit_tail(v, TailModel::frac_exp, right_tail_window(v, 1.0, 0.9 * g.half_width()));
  CHECK(f.rate == doctest::Approx(2.0 / (3.0 * std::sqrt(3.0))).epsilon(0.1));
}

TEST_CASE("persistence audit") {
  const Grid g(60, 512);
  SolverConfig c;
  c.dt = 1e-3;
  for (int i = 0; i <= 20; ++i) c.snapshot_times.push_back(0.05 * i);

  const PersistenceAudit z = persistence_audit(evolve(Field::zeros(g), c), 0.1);
  CHECK(z.pass);
  for (double n : z.norms) CHECK(n == 0.0);

  const PersistenceAudit s = persistence_audit(evolve(sample_soliton(SolitonSpec{1, 1.0, -10.0}, g), c), 0.1);
  CHECK(s.pass);
  CHECK(std::isfinite(s.growth));

  c.nonlinear = false;
  const PersistenceAudit l = persistence_audit(evolve(sample([](double x) { return std::exp(-x * x); }, g), c), 0.1);
  // The linear log-norm is convex in t, so only the smoothing bound is asserted.
  CHECK(std::isfinite(l.growth));
  CHECK(l.smoothing <= l.bound);
  CHECK_THROWS(persistence_audit(evolve(Field::zeros(g), c), 0.0));
}

TEST_CASE("interpolation check") {
  const Grid g(100, 4096);
  const Field f = sample([](double x) { return std::exp(-x * x); }, g);
  CHECK(interpolation_check(f, 1, 1, 1e-6).ratio == doctest::Approx(1.0).epsilon(1e-4));
  double lo = 1e300, hi = 0;
  for (double lam : {0.5, 1.0, 2.0, 4.0}) {
    const Field fl = sample([&](double x) { return std::exp(-(x / lam) * (x / lam)); }, g);
    const double r = interpolation_check(fl, 1, 1, 0.5).ratio;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  CHECK(hi / lo <= 3.0);
  // Regression pin for the soliton probe.
  const double pinned = interpolation_check(sample_soliton(SolitonSpec{}, g), 2, 1, 0.25).ratio;
  CHECK(pinned == doctest::Approx(0.9473575725).epsilon(1e-8));
  CHECK_THROWS(interpolation_check(f, 1, 1, 1.0));
}

TEST_CASE("conservation audit of zero data") {
  const Grid g(10, 64);
  SolverConfig c;
  c.conservation_check_interval = 10;
  c.snapshot_times = {0.1};
  const ConservationReport r = conserved_audit(evolve(Field::zeros(g), c));
  CHECK(r.mass_drift == 0.0);
  CHECK(r.l2_drift == 0.0);
  CHECK(r.hamiltonian_drift == 0.0);
}

TEST_CASE("weighted energy identity") {
  // d/dt int u^2 phi_N balances the flux and source terms. The centered time
  // difference leaves an O(h^2) residual on top of a small spatial floor.
  const Grid g(40, 1024);
  const Field u0 = sample([](double x) { return 0.5 * std::exp(-(x - 4) * (x - 4)); }, g);
  const DecaySchedule s(1.0);
  double flux = 0.0;
  auto residual = [&](double h) {
    SolverConfig c;
    c.dt = 1e-4;
    c.sponge = SpongeConfig{9.0, 0.0};
    c.snapshot_times = {0.3 - h, 0.3, 0.3 + h};
    const Trajectory tr = evolve(u0, c);
    const auto res = energy_identity_residuals(tr, 8, s);
    REQUIRE(res.size() == 1);
    const Field& u = tr.snapshots[1];
    const Field ux = derivative(u, 1);
    double f = 0.0;
    for (Eigen::Index i = 0; i < g.size(); ++i)
      f += ux.values(i) * ux.values(i) * phi_piecewise_jet(g.x()(i), u.t, 8, s).dx;
    flux = 3.0 * f * g.dx();
    return std::abs(res[0]);
  };
  const double coarse = residual(0.008), fine = residual(0.004);
  CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.25));
  CHECK(residual(0.002) <= 1e-3 * flux);
}
