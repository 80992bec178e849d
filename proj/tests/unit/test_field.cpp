#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qdiff/errors.hpp"
#include "qdiff/field.hpp"
#include "qdiff/spectral.hpp"

using namespace qdiff;

TEST_CASE("grid construction") {
  const auto g = make_grid(1000.0, 0.2);
  CHECK(g.size() == 5000);
  CHECK(g.x(0) == doctest::Approx(-500.0));
  CHECK(g.x(2500) == doctest::Approx(0.0));
  CHECK(g.mirror(1) == 4999);
  CHECK(g.mirror(0) == 0);
  CHECK(g.mirror(2500) == 2500);

  CHECK_THROWS_AS(make_grid(1000.0, 0.3), DomainError);  // 3333.33 points
  CHECK_THROWS_AS(make_grid(1.0, 0.2), DomainError);     // 5 points
  CHECK_THROWS_AS(make_grid(2.2, 0.2), DomainError);     // odd count
  CHECK_THROWS_AS(make_grid(10.0, 0.0), DomainError);
  CHECK_NOTHROW(make_grid(1.6, 0.2));
}

TEST_CASE("wavenumbers follow FFT ordering") {
  const Grid1D g(8, 0.5);
  const double k1 = 2.0 * std::numbers::pi / 4.0;
  CHECK(g.wavenumber(0) == 0.0);
  CHECK(g.wavenumber(1) == doctest::Approx(k1));
  CHECK(g.wavenumber(4) == doctest::Approx(-4.0 * k1));
  CHECK(g.wavenumber(7) == doctest::Approx(-k1));
}

TEST_CASE("gaussian bump has the expected number") {
  const auto g = make_grid(1000.0, 0.2);
  const auto s = gaussian_bump_state(g, 0.1, 15.0);
  const double expected = 1000.0 + 0.1 * 15.0 * std::sqrt(std::numbers::pi);
  CHECK(std::abs(total_number(s) - expected) < 1e-9 * expected);
  const auto rho = s.density();
  CHECK(rho[2500] == doctest::Approx(1.1).epsilon(1e-14));
  for (std::size_t j = 1; j < g.size(); ++j) CHECK(rho[j] == rho[g.mirror(j)]);

  const auto flat = gaussian_bump_state(g, 0.0, 15.0);
  for (const auto& p : flat.psi.values) CHECK(p == Complex(1.0, 0.0));
  CHECK_THROWS_AS(gaussian_bump_state(g, -1.0, 15.0), DomainError);
  CHECK_THROWS_AS(gaussian_bump_state(g, 0.1, 0.0), DomainError);
}

TEST_CASE("fft round trip") {
  const std::size_t n = 1000;
  SpectralTransform fft(n);
  std::vector<Complex> in(n), mid(n), out(n);
  for (std::size_t j = 0; j < n; ++j) {
    in[j] = Complex(std::sin(0.37 * j) + 0.1 * j, std::cos(1.3 * j * j));
  }
  fft.forward(in, mid);
  fft.backward(mid, out);
  double err = 0.0, scale = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    err = std::max(err, std::abs(out[j] - in[j]));
    scale = std::max(scale, std::abs(in[j]));
  }
  CHECK(err < 1e-12 * scale);

  // a single mode lands in its own bin
  for (std::size_t j = 0; j < n; ++j) {
    in[j] = std::polar(1.0, 2.0 * std::numbers::pi * 3.0 * j / n);
  }
  fft.forward(in, mid);
  CHECK(std::abs(mid[3] - Complex(n, 0.0)) < 1e-9);
  CHECK(std::abs(mid[4]) < 1e-9);
}

TEST_CASE("central differences are second order") {
  auto error = [](std::size_t n, int order) {
    const double L = 2.0 * std::numbers::pi;
    const Grid1D g(n, L / n);
    RealField f(g);
    for (std::size_t j = 0; j < n; ++j) f[j] = std::sin(3.0 * g.x(j));
    const auto d = derivative(f, order);
    double e = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double x = g.x(j);
      const double exact = order == 1 ? 3.0 * std::cos(3.0 * x) : -9.0 * std::sin(3.0 * x);
      e = std::max(e, std::abs(d[j] - exact));
    }
    return e;
  };
  for (int order : {1, 2}) {
    const double p = std::log2(error(128, order) / error(256, order));
    CHECK(p > 1.8);
    CHECK(p < 2.2);
  }
  const Grid1D g(8, 1.0);
  CHECK_THROWS_AS(derivative(RealField(g), 3), DomainError);
}

TEST_CASE("periodic interpolation wraps") {
  const Grid1D g(8, 1.0);
  RealField f(g);
  for (std::size_t j = 0; j < 8; ++j) f[j] = static_cast<double>(j);
  CHECK(interpolate_periodic(f, -4.0) == doctest::Approx(0.0));
  CHECK(interpolate_periodic(f, -3.5) == doctest::Approx(0.5));
  CHECK(interpolate_periodic(f, 3.5) == doctest::Approx(3.5));  // between 7 and 0
  CHECK(interpolate_periodic(f, 4.0) == doctest::Approx(0.0));
  CHECK(interpolate_periodic(f, 12.0) == doctest::Approx(0.0));
}
