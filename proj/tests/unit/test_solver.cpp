#include "gkdv/analytic.hpp"
#include "gkdv/diagnostics.hpp"
#include "gkdv/solver.hpp"
#include "gkdv/spectral.hpp"

#include <doctest.h>

#include <cmath>

using namespace gkdv;

namespace {

SolverConfig base(double dt, std::vector<double> times) {
  SolverConfig c;
  c.dt = dt;
  c.snapshot_times = std::move(times);
  return c;
}

double max_diff(const Field& a, const Field& b) { return (a.values - b.values).abs().maxCoeff(); }

}  // namespace

TEST_CASE("single steps") {
  const Grid g(30, 256);
  SolverConfig c = base(1e-2, {});
  const SpectralField zero = step(to_spectral(Field::zeros(g)), c);
  CHECK(zero.coeffs.abs().maxCoeff() == 0.0);
  CHECK(zero.t == doctest::Approx(1e-2));

  // Tiny data: the quadratic term is far below the tolerance.
  const Field tiny(g, 1e-8 * sample([](double x) { return std::exp(-x * x); }, g).values);
  const Field stepped = to_physical(step(to_spectral(tiny), c));
  CHECK(max_diff(stepped, linear_propagate(tiny, c.dt)) <= 1e-18);

  // Local error O(h^5): one step vs two half steps.
  const Field sol = sample_soliton(SolitonSpec{1, 1.0, 0.0}, g);
  auto gap = [&](double h) {
    SolverConfig full = base(h, {}), half = base(h / 2, {});
    const Field one = to_physical(step(to_spectral(sol), full));
    const Field two = to_physical(step(step(to_spectral(sol), half), half));
    return max_diff(one, two);
  };
  const double r = gap(0.025) / gap(0.0125);
  CHECK(r == doctest::Approx(32.0).epsilon(0.2));
}

TEST_CASE("soliton transport, conservation and global order") {
  const SolitonSpec spec{1, 1.0, -5.0};
  const Grid g(40, 512);
  const Field u0 = sample_soliton(spec, g);
  SolverConfig c = base(1e-3, {1.0, 2.0});
  c.conservation_check_interval = 100;
  const Trajectory tr = evolve(u0, c);
  REQUIRE(tr.snapshots.size() == 2);
  CHECK(tr.clean());
  CHECK(max_diff(tr.snapshots.back(), sample_soliton(spec, g, 2.0)) <= 1e-5);
  const ConservationReport r = conserved_audit(tr);
  CHECK(r.mass_drift <= 1e-10);
  CHECK(r.l2_drift <= 1e-10);
  CHECK(r.hamiltonian_drift <= 1e-8);

  // Error against the exact wave shrinks about 16x when dt halves.
  auto err = [&](double dt) {
    const Trajectory t = evolve(u0, base(dt, {2.0}));
    return max_diff(t.snapshots.back(), sample_soliton(spec, g, 2.0));
  };
  CHECK(err(0.01) / err(0.005) == doctest::Approx(16.0).epsilon(0.15));
}

TEST_CASE("k = 2 soliton") {
  const SolitonSpec spec{2, 1.0, 0.0};
  const Grid g(40, 512);
  SolverConfig c = base(1e-3, {1.0});
  c.k = 2;
  const Trajectory tr = evolve(sample_soliton(spec, g), c);
  CHECK(max_diff(tr.snapshots.back(), sample_soliton(spec, g, 1.0)) <= 1e-5);
}

TEST_CASE("snapshots, zero data and backward runs") {
  const Grid g(30, 256);
  const Trajectory z = evolve(Field::zeros(g), base(1e-2, {0.0, 0.5, 1.0}));
  REQUIRE(z.snapshots.size() == 3);
  for (const Field& u : z.snapshots) CHECK(u.max_abs() == 0.0);
  CHECK(z.snapshots[1].t == doctest::Approx(0.5));

  const Field u0 = sample([](double x) { return 0.5 * std::exp(-x * x); }, g);
  const Trajectory fwd = evolve(u0, base(1e-3, {0.5}));
  SolverConfig back = base(-1e-3, {-0.5});
  Field start = fwd.snapshots.back();
  start.t = 0.0;
  const Trajectory bwd = evolve(start, back);
  REQUIRE(bwd.snapshots.size() == 1);
  CHECK(bwd.snapshots.back().t == doctest::Approx(-0.5));
  CHECK(max_diff(bwd.snapshots.back(), u0) <= 1e-9);
  CHECK(max_diff(reflect(reflect(u0)), u0) == 0.0);
}

TEST_CASE("audit flags") {
  // Dispersed radiation reaches the edges of a small grid.
  const Grid g(20, 256);
  const Field u0 = sample([](double x) { return std::exp(-x * x); }, g);
  const Trajectory tr = evolve(u0, base(1e-3, {2.0}));
  CHECK(tr.flags.boundary_contamination);
  CHECK(boundary_ratio(tr.snapshots.back()) > 1e-8);

  // Large data for k = 4 leaves any bounded range.
  const Grid h(10, 256);
  const Field big(h, 6.0 * sample([](double x) { return std::exp(-x * x); }, h).values);
  SolverConfig c = base(1e-4, {0.5});
  c.k = 4;
  const Trajectory b = evolve(big, c);
  CHECK((b.flags.blow_up || b.flags.under_resolved));
  if (b.flags.blow_up) CHECK(b.flags.blow_up_time < 0.5);
}

TEST_CASE("sponge layer") {
  const Grid g(100, 512);
  const double w = g.half_width() / 8, sigma = 5.0;
  const Eigen::ArrayXd p = sponge_profile(g, w, sigma);
  for (Eigen::Index i = 0; i < g.size(); ++i)
    if (std::abs(g.x()(i)) <= g.half_width() - w) CHECK(std::exp(-p(i) * 1e-3) == 1.0);
  CHECK(p.maxCoeff() == doctest::Approx(sigma));
  CHECK(sponge_profile(g, w, 0.0).abs().maxCoeff() == 0.0);

  // A left-going packet (group velocity -3 xi0^2) crosses the layer and wraps.
  const Field packet = sample([](double x) { return std::exp(-x * x / 144) * std::cos(1.5 * x); }, g);
  SolverConfig c = base(5e-3, {46.0});
  c.nonlinear = false;
  const double free = evolve(packet, c).snapshots.back().max_abs();
  c.sponge = SpongeConfig{w, sigma};
  const Trajectory damped = evolve(packet, c);
  CHECK(damped.snapshots.back().max_abs() <= 0.01 * free);

  // L2 never grows with the sponge on.
  c.snapshot_times = {};
  c.conservation_check_interval = 200;
  CHECK(conserved_audit(evolve(packet, c)).l2_nonincreasing);
}

TEST_CASE("solver configuration checks") {
  const Grid g(10, 64);
  SolverConfig c;
  c.dt = 0.0;
  CHECK_THROWS(c.validate(g));
  c.dt = 1e-3;
  c.k = 0;
  CHECK_THROWS(c.validate(g));
  c.k = 1;
  c.sponge = SpongeConfig{5.0, 1.0};
  CHECK_THROWS(c.validate(g));
  c.sponge = SpongeConfig{2.0, 1.0};
  CHECK_NOTHROW(c.validate(g));
}
