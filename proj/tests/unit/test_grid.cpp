#include "gkdv/analytic.hpp"
#include "gkdv/grid.hpp"
#include "gkdv/spectral.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>

using namespace gkdv;

TEST_CASE("grid spacing and wavenumbers") {
  const Grid g(M_PI, 16);
  CHECK(g.dx() == doctest::Approx(2 * M_PI / 16).epsilon(1e-15));
  const auto& xi = g.wavenumbers();
  REQUIRE(xi.size() == 9);
  for (Eigen::Index j = 0; j < xi.size(); ++j) CHECK(xi(j) == doctest::Approx(static_cast<double>(j)).epsilon(1e-14));
  const auto c = g.centered_wavenumbers();
  CHECK(c.minCoeff() == doctest::Approx(-8.0));
  CHECK(c.maxCoeff() == doctest::Approx(7.0));

  CHECK(Grid(100, 4096).dx() == doctest::Approx(0.048828125));
  CHECK_THROWS(Grid(M_PI, 15));
  CHECK_THROWS(Grid(0.0, 16));
  CHECK_THROWS(Grid(-1.0, 16));
}

TEST_CASE("sampling") {
  const Grid g(M_PI, 16);
  CHECK(sample([](double) { return 0.0; }, g).max_abs() == 0.0);
  const Field c = sample([](double x) { return std::cos(x); }, g);
  for (int i = 0; i < 16; ++i) CHECK(c.values(i) == std::cos(-M_PI + i * 2 * M_PI / 16));
  CHECK_THROWS_AS(sample([](double x) { return 1.0 / (x - x); }, g), std::domain_error);

  const Grid s(30, 256);
  const Field sol = sample([](double x) { return soliton(SolitonSpec{1, 1.0, 0.0}, x, 0.0); }, s);
  CHECK(sol.values(s.nearest_index(0.0)) == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("spectral derivatives of a single mode") {
  const Grid g(M_PI, 16);
  const Field c = sample([](double x) { return std::cos(x); }, g);
  const Field d1 = derivative(c, 1);
  const Field d3 = derivative(c, 3);
  for (int i = 0; i < 16; ++i) {
    const double x = g.x()(i);
    CHECK(std::abs(d1.values(i) + std::sin(x)) < 1e-10);
    CHECK(std::abs(d3.values(i) - std::sin(x)) < 1e-10);
  }
}

TEST_CASE("spectral derivative of the soliton against centered differences") {
  // Independent oracle: centered differences of the closed-form profile,
  // whose error is O(h^2). Halving h must cut the gap by four.
  const SolitonSpec spec{1, 1.0, 0.0};
  const Grid g(30, 512);
  const Field d = derivative(sample_soliton(spec, g), 1);
  auto gap = [&](double h) {
    double m = 0.0;
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      const double x = g.x()(i);
      const double fd = (soliton_profile(spec, x + h) - soliton_profile(spec, x - h)) / (2 * h);
      m = std::max(m, std::abs(fd - d.values(i)));
    }
    return m;
  };
  const double h = g.dx();
  const double e1 = gap(h), e2 = gap(h / 2);
  CHECK(e1 < h * h);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("Sobolev norms") {
  const Grid g(M_PI, 16);
  const Field c = sample([](double x) { return std::cos(x); }, g);
  CHECK(sobolev_norm(c, 0) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-13));
  CHECK(sobolev_norm(c, 1) == doctest::Approx(std::sqrt(2 * M_PI)).epsilon(1e-13));
  CHECK_THROWS(sobolev_norm(c, -0.5));

  // Box data: brute-force DFT sum over the full symmetric spectrum.
  const Grid b(10, 256);
  const Field box = sample([](double x) { return 0.5 * (std::tanh((x + 2) / 0.05) - std::tanh((x - 2) / 0.05)); }, b);
  const int n = b.size();
  for (double s : {0.25, 0.5, 1.0}) {
    double sum = 0.0;
    for (int j = -n / 2; j < n / 2; ++j) {
      std::complex<double> cj = 0.0;
      for (int i = 0; i < n; ++i) cj += box.values(i) * std::polar(1.0, -2 * M_PI * i * j / n);
      // Nyquist mode counted once, with its real part only.
      if (j == -n / 2) cj = cj.real();
      const double xi = M_PI * j / b.half_width();
      sum += std::pow(1 + xi * xi, s) * std::norm(cj);
    }
    CHECK(sobolev_norm(box, s) == doctest::Approx(std::sqrt(sum * b.dx() / n)).epsilon(1e-10));
  }
}

TEST_CASE("band-limit audit") {
  const Grid g(30, 512);
  CHECK(band_limited(sample_soliton(SolitonSpec{}, g)));
  const Field box = sample([](double x) { return std::abs(x) < 1 ? 1.0 : 0.0; }, g);
  CHECK_FALSE(band_limited(box));
}
