#include "qdiff/soliton.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "qdiff/errors.hpp"
#include "qdiff/gp.hpp"

namespace qdiff {

namespace {

constexpr double kSqrt3 = std::numbers::sqrt3;
constexpr double kYMin = 1.0 - kSqrt3;
constexpr double kC = NaturalUnits::c;

// rho / rho0 = 1 + u v / c^2 - v^2 / (2 c^2), written in factored form so it
// cannot round below zero inside the admissible window.
double density_from_v(double v, double u) {
  const double s = std::sqrt(u * u + 2.0 * kC * kC);
  return -(v - (u - s)) * (v - (u + s)) / (2.0 * kC * kC);
}

// Bisection on a monotone function g over (lo, hi) for g = target; only
// interior points are evaluated. `increasing` gives the direction of g.
template <class G>
double bisect(G&& g, double lo, double hi, double target, bool increasing) {
  for (int it = 0; it < 4000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) return mid;
    const double gm = g(mid);
    if ((gm < target) == increasing) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double soliton_f(double y) {
  if (!(y > kYMin && y < 0.0)) throw DomainError("soliton_f needs y in (1 - sqrt3, 0)");
  return std::log(-y) - (2.0 * kSqrt3 + 3.0) / 6.0 * std::log(kSqrt3 - 1.0 + y) +
         (2.0 * kSqrt3 - 3.0) / 6.0 * std::log(kSqrt3 + 1.0 - y);
}

double soliton_f_inverse(double target) {
  if (std::isnan(target)) throw DomainError("soliton_f_inverse of NaN");
  return bisect([](double y) { return soliton_f(y); }, kYMin, 0.0, target, false);
}

SolitonProfile sonic_profile(std::span<const double> z, double z0, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
  SolitonProfile p{kC, lambda, z0, {z.begin(), z.end()}, {}, {}};
  p.v.resize(z.size());
  p.rho.resize(z.size());
  const double scale = std::numbers::sqrt2 * lambda / 3.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double y = soliton_f_inverse(scale * (z0 - z[i]));
    p.v[i] = kC * y;
    p.rho[i] = -0.5 * (y - kYMin) * (y - (1.0 + kSqrt3));
  }
  return p;
}

const char* to_string(SpeedClass s) noexcept {
  switch (s) {
    case SpeedClass::Invalid:
      return "invalid";
    case SpeedClass::ValidVNegative:
      return "valid_v_negative";
    case SpeedClass::ValidVPositive:
      return "valid_v_positive";
  }
  return "invalid";
}

SpeedClass classify_speed(double u) {
  if (!std::isfinite(u)) return SpeedClass::Invalid;
  const double s = std::sqrt(u * u + 2.0 * kC * kC);
  // dz/dv vanishes where 2c^2 - 2u^2 + 6uv - 3v^2 = 0
  const double half = s / kSqrt3;
  const std::array<double, 2> roots{u - half, u + half};
  const double margin = 1e-12 * s;
  auto clean = [&](double lo, double hi) {
    for (double r : roots) {
      if (r > lo + margin && r < hi - margin) return false;
    }
    return true;
  };
  // Each side of the pole at v = 0 is bounded by a zero of the density, where
  // z(v) has a logarithmic singularity, so a root-free side covers the line.
  if (clean(u - s, 0.0)) return SpeedClass::ValidVNegative;
  if (clean(0.0, u + s)) return SpeedClass::ValidVPositive;
  return SpeedClass::Invalid;
}

double soliton_z_of_v(double v, double u, double lambda) {
  const double c2 = kC * kC;
  const double s = std::sqrt(u * u + 2.0 * c2);
  const double rhs = (1.0 - u * u / c2) / v - (2.0 + u * u / c2) * (u / c2) * std::log(std::abs(v)) -
                     s / ((u + s) * (u + s)) * std::log(std::abs(v - u - s)) +
                     s / ((u - s) * (u - s)) * std::log(std::abs(v - u + s));
  // the prefactor sqrt2 lambda / (xi c) is lambda in natural units
  return rhs / lambda;
}

SolitonProfile general_profile(double u, std::span<const double> z, double z0, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
  const SpeedClass cls = classify_speed(u);
  if (cls == SpeedClass::Invalid) throw DomainError("no valid soliton for this speed (|u| < c)");
  if (cls == SpeedClass::ValidVPositive) {
    // v(-u; z, z0) = -v(u; -z, -z0)
    std::vector<double> mz(z.size());
    std::transform(z.begin(), z.end(), mz.begin(), [](double q) { return -q; });
    SolitonProfile p = general_profile(-u, mz, -z0, lambda);
    p.u = u;
    p.z0 = z0;
    p.z.assign(z.begin(), z.end());
    for (auto& v : p.v) v = -v;
    return p;
  }

  const double s = std::sqrt(u * u + 2.0 * kC * kC);
  const double lo = u - s, hi = 0.0;
  auto zv = [&](double v) { return soliton_z_of_v(v, u, lambda); };

  constexpr std::size_t kTable = 2048;
  std::vector<double> tv(kTable), tz(kTable);
  for (std::size_t i = 0; i < kTable; ++i) {
    tv[i] = lo + (hi - lo) * static_cast<double>(i + 1) / static_cast<double>(kTable + 1);
    tz[i] = zv(tv[i]);
    if (i > 0 && !(tz[i] > tz[i - 1])) {
      throw DomainError("velocity branch is not single-valued");
    }
  }

  SolitonProfile p{u, lambda, z0, {z.begin(), z.end()}, {}, {}};
  p.v.resize(z.size());
  p.rho.resize(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double target = z[i] - z0;
    const auto k = static_cast<std::size_t>(std::upper_bound(tz.begin(), tz.end(), target) - tz.begin());
    const double a = (k == 0) ? lo : tv[k - 1];
    const double b = (k == kTable) ? hi : tv[k];
    const double v = bisect(zv, a, b, target, true);
    p.v[i] = v;
    p.rho[i] = density_from_v(v, u);
  }
  return p;
}

HydroResidual hydro_residual(const SolitonProfile& p) {
  const std::size_t n = p.z.size();
  if (p.v.size() != n || p.rho.size() != n) throw DomainError("profile arrays differ in length");
  if (n < 7) throw DomainError("profile needs at least 7 samples");
  if (!(p.lambda > 0.0)) throw DomainError("lambda must be positive");
  const double h = p.z[1] - p.z[0];
  if (!(h > 0.0)) throw DomainError("z samples must increase");
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs(p.z[i] - p.z[i - 1] - h) > 1e-9 * h) throw DomainError("z samples must be uniform");
  }
  if (h > 0.05 / p.lambda * (1.0 + 1e-12)) throw DomainError("z spacing exceeds 0.05 / lambda");

  auto d1 = [h](const std::vector<double>& f, std::size_t i) {
    return (-f[i - 3] + 9.0 * f[i - 2] - 45.0 * f[i - 1] + 45.0 * f[i + 1] - 9.0 * f[i + 2] +
            f[i + 3]) /
           (60.0 * h);
  };
  std::vector<double> flux(n);
  for (std::size_t i = 0; i < n; ++i) flux[i] = p.rho[i] * p.v[i];

  HydroResidual r;
  const double c2 = kC * kC;
  for (std::size_t i = 3; i + 3 < n; ++i) {
    const double drho = d1(p.rho, i);
    const double dv = d1(p.v, i);
    const double cont = -p.u * drho + d1(flux, i) + p.lambda * p.rho[i] * p.v[i] * p.v[i];
    const double euler = -p.u * dv + p.v[i] * dv + c2 * drho;
    r.continuity = std::max(r.continuity, std::abs(cont));
    r.euler = std::max(r.euler, std::abs(euler));
  }
  return r;
}

namespace {

// y on the front branch where 1 + y - y^2 / 2 = r
double y_at_density(double r) { return 1.0 - std::sqrt(3.0 - 2.0 * r); }

double sonic_offset(double y, double lambda) {
  return -3.0 * soliton_f(y) / (std::numbers::sqrt2 * lambda);
}

// Sub-cell location of the half-density crossing between samples j and j+1
// using the quintic through j-2 .. j+3 when those samples exist.
double refine_crossing(const Grid1D& grid, std::span<const double> rho, std::size_t j,
                       double level) {
  const double lin = (level - rho[j]) / (rho[j + 1] - rho[j]);
  if (j < 2 || j + 3 >= rho.size()) return grid.x(j) + lin * grid.dx();
  std::array<double, 6> f{};
  for (int k = 0; k < 6; ++k) f[k] = rho[j - 2 + k];
  auto poly = [&](double s) {
    double total = 0.0;
    for (int a = 0; a < 6; ++a) {
      double w = 1.0;
      for (int b = 0; b < 6; ++b) {
        if (b != a) w *= (s - b) / static_cast<double>(a - b);
      }
      total += w * f[a];
    }
    return total;
  };
  double lo = 2.0, hi = 3.0;
  for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (poly(mid) < level ? lo : hi) = mid;
  }
  return grid.x(j) + (0.5 * (lo + hi) - 2.0) * grid.dx();
}

}  // namespace

FrontFit fit_front(const Grid1D& grid, std::span<const double> rho, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
  if (rho.size() != grid.size()) throw DomainError("density does not match grid");
  const double level = 0.5;
  std::optional<std::size_t> bracket;
  for (std::size_t j = rho.size() - 1; j-- > 0;) {
    if (rho[j] < level && rho[j + 1] >= level) {
      bracket = j;
      break;
    }
  }
  if (!bracket) throw DomainError("no crossing found");
  const double xc = refine_crossing(grid, rho, *bracket, level);

  FrontFit fit;
  fit.z0 = xc - sonic_offset(y_at_density(level), lambda);
  const double x_lo = fit.z0 + sonic_offset(y_at_density(0.05), lambda);
  const double x_hi = fit.z0 + sonic_offset(y_at_density(0.95), lambda);
  const double scale = std::numbers::sqrt2 * lambda / 3.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.x(j);
    if (x < x_lo || x > x_hi) continue;
    const double y = soliton_f_inverse(scale * (fit.z0 - x));
    const double model = -0.5 * (y - kYMin) * (y - (1.0 + kSqrt3));
    fit.mismatch = std::max(fit.mismatch, std::abs(rho[j] - model));
    ++fit.window_points;
  }
  return fit;
}

double sonic_core_width(double lambda) {
  if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
  return std::abs(sonic_offset(y_at_density(0.9), lambda) - sonic_offset(y_at_density(0.1), lambda));
}

}  // namespace qdiff
