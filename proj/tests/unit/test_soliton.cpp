#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qdiff/errors.hpp"
#include "qdiff/soliton.hpp"

using namespace qdiff;

namespace {

constexpr double kC = NaturalUnits::c;
const double kYMin = 1.0 - std::sqrt(3.0);

std::vector<double> uniform_z(double lo, double hi, double h) {
  std::vector<double> z;
  const auto n = static_cast<std::size_t>(std::llround((hi - lo) / h));
  for (std::size_t i = 0; i <= n; ++i) z.push_back(lo + h * static_cast<double>(i));
  return z;
}

// position where a monotone sampled profile crosses `level`
double crossing(const SolitonProfile& p, double level) {
  for (std::size_t i = 0; i + 1 < p.z.size(); ++i) {
    if ((p.rho[i] - level) * (p.rho[i + 1] - level) <= 0.0) {
      const double f = (level - p.rho[i]) / (p.rho[i + 1] - p.rho[i]);
      return p.z[i] + f * (p.z[i + 1] - p.z[i]);
    }
  }
  FAIL("level not crossed");
  return 0.0;
}

}  // namespace

TEST_CASE("profile function values and limits") {
  CHECK(soliton_f(-0.5) == doctest::Approx(0.97138584826783785).epsilon(1e-14));
  CHECK(soliton_f(-1e-12) < -25.0);
  CHECK(soliton_f(kYMin + 1e-12) > 25.0);
  CHECK_THROWS_AS(soliton_f(0.0), DomainError);
  CHECK_THROWS_AS(soliton_f(kYMin), DomainError);
  CHECK_THROWS_AS(soliton_f(0.3), DomainError);

  // f' = (2 - y) / (y (2 + 2y - y^2))
  for (double y : {-0.7, -0.4, -0.1}) {
    const double h = 1e-6;
    const double num = (soliton_f(y + h) - soliton_f(y - h)) / (2.0 * h);
    CHECK(num == doctest::Approx((2.0 - y) / (y * (2.0 + 2.0 * y - y * y))).epsilon(1e-7));
  }
  for (double t : {-30.0, -2.0, 0.0, 1.5, 15.0}) {
    CHECK(soliton_f(soliton_f_inverse(t)) == doctest::Approx(t).epsilon(1e-10));
  }
  // near 1 - sqrt3 the spacing of doubles limits how well f can be hit
  CHECK(soliton_f(soliton_f_inverse(30.0)) == doctest::Approx(30.0).epsilon(1e-5));
}

TEST_CASE("sonic profile end states") {
  const std::vector<double> z{-400.0, 400.0};
  const auto p = sonic_profile(z, 0.0, 0.4);
  CHECK(std::abs(p.rho[0]) < 1e-8);
  CHECK(std::abs(p.v[0] - kYMin * kC) < 1e-8);
  CHECK(std::abs(p.rho[1] - 1.0) < 1e-8);
  CHECK(std::abs(p.v[1]) < 1e-8);
  CHECK(p.u == kC);
  CHECK_THROWS_AS(sonic_profile(z, 0.0, 0.0), DomainError);
}

TEST_CASE("sonic profile scales as 1/lambda") {
  const auto z = uniform_z(-50.0, 50.0, 0.5);
  std::vector<double> z2(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) z2[i] = 0.5 * z[i];
  const auto a = sonic_profile(z, 0.0, 0.3);
  const auto b = sonic_profile(z2, 0.0, 0.6);
  for (std::size_t i = 0; i < z.size(); ++i) CHECK(a.rho[i] == doctest::Approx(b.rho[i]).epsilon(1e-12));
  CHECK(sonic_core_width(0.3) == doctest::Approx(2.0 * sonic_core_width(0.6)));
}

TEST_CASE("speed classification") {
  CHECK(classify_speed(0.5 * kC) == SpeedClass::Invalid);
  CHECK(classify_speed(0.0) == SpeedClass::Invalid);
  CHECK(classify_speed(-0.99 * kC) == SpeedClass::Invalid);
  CHECK(classify_speed(kC) == SpeedClass::ValidVNegative);
  CHECK(classify_speed(1.2 * kC) == SpeedClass::ValidVNegative);
  CHECK(classify_speed(-kC) == SpeedClass::ValidVPositive);
  CHECK(classify_speed(-1.2 * kC) == SpeedClass::ValidVPositive);
  CHECK(std::string(to_string(SpeedClass::ValidVPositive)) == "valid_v_positive");
}

TEST_CASE("general profile reduces to the sonic one") {
  const auto z = uniform_z(-60.0, 60.0, 0.25);
  const auto s = sonic_profile(z, 3.0, 0.5);
  const auto g = general_profile(kC, z, 3.0, 0.5);
  for (std::size_t i = 0; i < z.size(); ++i) {
    CHECK(std::abs(g.v[i] - s.v[i]) < 1e-8);
    CHECK(std::abs(g.rho[i] - s.rho[i]) < 1e-8);
  }
}

TEST_CASE("negative speed mirrors the positive one") {
  const auto z = uniform_z(-40.0, 40.0, 0.5);
  std::vector<double> mz(z.rbegin(), z.rend());
  for (auto& q : mz) q = -q;
  const auto pos = general_profile(kC, z, 2.0, 0.4);
  const auto neg = general_profile(-kC, mz, -2.0, 0.4);
  const std::size_t n = z.size();
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(neg.v[n - 1 - i] == doctest::Approx(-pos.v[i]).epsilon(1e-12));
    CHECK(neg.v[n - 1 - i] >= 0.0);
  }
  const auto sup = general_profile(-1.2 * kC, z, 0.0, 0.4);
  for (double v : sup.v) CHECK(v >= 0.0);
}

TEST_CASE("supersonic branches") {
  CHECK_THROWS_AS(general_profile(0.5 * kC, std::vector<double>{0.0}, 0.0, 1.0), DomainError);
  const auto z = uniform_z(-80.0, 80.0, 0.4);
  for (int k = 0; k <= 10; ++k) {
    const double u = kC * (1.0 + 0.1 * k);
    const auto p = general_profile(u, z, 0.0, 0.5);
    const double rho_max = 1.0 + u * u / (2.0 * kC * kC);
    for (std::size_t i = 0; i < z.size(); ++i) {
      CHECK(p.v[i] <= 0.0);
      CHECK(p.rho[i] >= 0.0);
      CHECK(p.rho[i] <= rho_max + 1e-12);
      if (i > 0) CHECK(p.v[i] > p.v[i - 1]);
    }
    // z(v) reproduces the requested samples
    for (std::size_t i = 0; i < z.size(); i += 40) {
      if (p.v[i] < 0.0 && p.v[i] > u - std::sqrt(u * u + 2.0 * kC * kC)) {
        CHECK(soliton_z_of_v(p.v[i], u, 0.5) == doctest::Approx(z[i]).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("profiles solve the hydrodynamic equations") {
  const double lambda = 0.4;
  const auto z = uniform_z(-100.0, 100.0, 0.05 / lambda);
  const auto s = sonic_profile(z, 0.0, lambda);
  const auto r = hydro_residual(s);
  CHECK(r.continuity < 1e-6);
  CHECK(r.euler < 1e-6);

  const auto g = general_profile(1.3 * kC, z, 0.0, lambda);
  const auto rg = hydro_residual(g);
  CHECK(rg.continuity < 1e-6);
  CHECK(rg.euler < 1e-6);

  SolitonProfile flat{kC, lambda, 0.0, z, std::vector<double>(z.size(), 0.0),
                      std::vector<double>(z.size(), 1.0)};
  const auto r0 = hydro_residual(flat);
  CHECK(r0.continuity == 0.0);
  CHECK(r0.euler == 0.0);

  auto bad = s;
  bad.rho[z.size() / 2] += 0.01;
  CHECK(hydro_residual(bad).euler > 1e-2);

  const auto coarse = uniform_z(-10.0, 10.0, 0.5);
  CHECK_THROWS_AS(hydro_residual(sonic_profile(coarse, 0.0, lambda)), DomainError);
}

TEST_CASE("core width is inversely proportional to lambda") {
  const double w1 = [] {
    const auto z = uniform_z(-200.0, 200.0, 0.01);
    const auto p = sonic_profile(z, 0.0, 0.1);
    return crossing(p, 0.9) - crossing(p, 0.1);
  }();
  for (double lambda : {0.2, 0.4, 0.8}) {
    const auto z = uniform_z(-200.0, 200.0, 0.01);
    const auto p = sonic_profile(z, 0.0, lambda);
    const double w = crossing(p, 0.9) - crossing(p, 0.1);
    CHECK(std::abs(w * lambda / (w1 * 0.1) - 1.0) < 0.02);
  }
  CHECK(w1 == doctest::Approx(sonic_core_width(0.1)).epsilon(1e-4));
}

TEST_CASE("front fit") {
  const double lambda = 0.4;
  const auto grid = make_grid(400.0, 0.05);
  const auto p = sonic_profile(grid.coordinates(), 37.0, lambda);
  const auto fit = fit_front(grid, p.rho, lambda);
  CHECK(fit.z0 == doctest::Approx(37.0).epsilon(1e-9));
  CHECK(fit.mismatch < 1e-8);
  CHECK(fit.window_points > 100);

  const std::vector<double> flat(grid.size(), 1.0);
  CHECK_THROWS_AS(fit_front(grid, flat, lambda), DomainError);
}
