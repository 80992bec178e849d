#include "qdiff/polariton.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include "qdiff/errors.hpp"

namespace qdiff {

void PolaritonParams::validate() const {
  if (!(g > 0.0)) throw DomainError("g must be positive");
  if (!(c_light > 0.0)) throw DomainError("speed of light must be positive");
  if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
  if (!(Omega > 0.0)) throw DomainError("Omega must be positive");
  if (C6 == 0.0 || !std::isfinite(C6)) throw DomainError("C6 must be non-zero");
  if (!std::isfinite(delta)) throw DomainError("delta must be finite");
}

std::vector<std::string> PolaritonParams::warnings() const {
  std::vector<std::string> out;
  const double scale = std::max({std::abs(Delta()), Omega, gamma});
  if (g < 10.0 * scale) {
    out.push_back("g is less than 10x max(|Delta|, Omega, gamma); the dark-state reduction "
                  "may not hold");
  }
  return out;
}

PolaritonParams PolaritonParams::scan_default() {
  PolaritonParams p;
  p.delta = -10.0;
  p.gamma = 1.0;
  p.Omega = 6.0 * std::abs(p.Delta());
  p.C6 = 1.0;
  return p;
}

Complex effective_mass(const PolaritonParams& p) {
  const double g2 = p.g * p.g;
  return -(g2 * g2) / (2.0 * p.Delta() * p.c_light * p.c_light * p.Omega * p.Omega);
}

double one_body_lambda(double delta, double gamma) {
  if (!(delta < 0.0)) throw DomainError("one-body dissipation is defined for delta < 0");
  return gamma / std::abs(delta);
}

double kappa(const PolaritonParams& p) { return p.g * p.g / (p.c_light * std::abs(p.Delta())); }

ChiBlockade chi_and_blockade(const PolaritonParams& p) {
  if (p.C6 == 0.0) throw DomainError("C6 must be non-zero");
  const Complex d = p.Delta();
  ChiBlockade out;
  out.chi = 1.0 / (2.0 * d) - d / (2.0 * p.Omega * p.Omega);
  out.r_b = std::pow(std::abs(p.C6 * out.chi), 1.0 / 6.0);
  out.degenerate = std::abs(out.chi) * std::abs(d) < 1e-12;
  return out;
}

namespace {

ChiBlockade require_blockade(const PolaritonParams& p) {
  const auto cb = chi_and_blockade(p);
  if (cb.degenerate) throw DomainError("chi vanishes: no blockade radius");
  return cb;
}

// r_b^2 m U(r_b s), the potential in units of the blockade radius
struct ScaledPotential {
  Complex amplitude;  // r_b^2 m / chi
  Complex sigma;
  Complex operator()(double s) const {
    const double s3 = s * s * s;
    return amplitude / (sigma * (s3 * s3) - 1.0);
  }
};

ScaledPotential scaled_potential(const PolaritonParams& p, const ChiBlockade& cb) {
  const Complex cc = cb.chi * p.C6;
  return {cb.r_b * cb.r_b * effective_mass(p) / cb.chi, std::abs(cc) / cc};
}

}  // namespace

Complex effective_potential(double r, const PolaritonParams& p) {
  if (!(r > 0.0)) throw DomainError("r must be positive");
  const auto cb = require_blockade(p);
  const Complex cc = cb.chi * p.C6;
  const double s = r / cb.r_b;
  const double s3 = s * s * s;
  return (1.0 / cb.chi) / ((std::abs(cc) / cc) * (s3 * s3) - 1.0);
}

Complex potential_integral(const PolaritonParams& p) {
  const auto cb = require_blockade(p);
  const auto q = scaled_potential(p, cb);
  using boost::math::quadrature::exp_sinh;
  using boost::math::quadrature::gauss_kronrod;
  constexpr double tol = 1e-13;
  const double split = 2.0;
  auto part = [&](auto proj) {
    auto f = [&](double s) { return proj(q(s)); };
    const double inner = gauss_kronrod<double, 61>::integrate(f, 0.0, split, 20, tol);
    exp_sinh<double> tail;
    return inner + tail.integrate(f, split, std::numeric_limits<double>::infinity(), tol);
  };
  const double re = part([](Complex z) { return z.real(); });
  const double im = part([](Complex z) { return z.imag(); });
  // ds = dr / r_b and q carries r_b^2, so one factor of r_b remains
  return Complex(re, im) / cb.r_b;
}

Complex square_well_strength(const PolaritonParams& p) {
  const auto cb = require_blockade(p);
  const Complex d = p.Delta();
  const double k = kappa(p);
  const double om2 = p.Omega * p.Omega;
  const Complex w = d / (d * d - om2);
  const double ad = std::abs(d);
  return (std::numbers::pi / 3.0) * cb.r_b * k * k * ad * ad * std::pow(w, 5.0 / 6.0) /
         (d * std::cbrt(p.Omega) * std::pow(std::abs(1.0 / d - d / om2), 1.0 / 6.0));
}

Complex scattering_length_square_well(Complex u0, double r_b) {
  if (u0 == 0.0) throw DomainError("well strength must be non-zero");
  if (!(r_b > 0.0)) throw DomainError("well width must be positive");
  const Complex x = u0 * r_b;
  const Complex sn = std::sin(x);
  if (std::abs(sn) < 1e-300) throw DomainError("u0 r_b at a zero of sin: a diverges");
  return r_b + std::cos(x) / (u0 * sn);
}

Complex scattering_length_square_well(const PolaritonParams& p) {
  p.validate();
  const auto cb = require_blockade(p);
  const Complex u0 = std::sqrt(square_well_strength(p) / cb.r_b);
  return scattering_length_square_well(u0, cb.r_b);
}

NumericScattering zero_energy_scattering(const std::function<Complex(double)>& q,
                                         const ScatteringOptions& opt) {
  namespace ode = boost::numeric::odeint;
  if (!(opt.r_min > 0.0) || !(opt.r_max > opt.r_min)) throw DomainError("need 0 < r_min < r_max");
  if (!(opt.fit_from > 0.0 && opt.fit_from < 1.0)) throw DomainError("fit window must be inside (0, 1)");
  if (!(opt.tolerance > 0.0)) throw DomainError("tolerance must be positive");
  using State = std::array<double, 4>;  // Re psi, Im psi, Re psi', Im psi'

  // even solution: psi = 1 + q(0) r^2 / 2 + O(r^4)
  const Complex q0 = q(0.0);
  const double r0 = opt.r_min;
  const Complex psi0 = 1.0 + 0.5 * q0 * r0 * r0;
  const Complex dpsi0 = q0 * r0;
  State x{psi0.real(), psi0.imag(), dpsi0.real(), dpsi0.imag()};

  auto sys = [&q](const State& y, State& dy, double r) {
    const Complex v = q(r) * Complex(y[0], y[1]);
    dy[0] = y[2];
    dy[1] = y[3];
    dy[2] = v.real();
    dy[3] = v.imag();
  };

  constexpr int kFit = 64;
  std::vector<double> times;
  times.push_back(r0);
  const double a0 = opt.fit_from * opt.r_max;
  for (int i = 0; i <= kFit; ++i) times.push_back(a0 + (opt.r_max - a0) * i / kFit);
  std::vector<double> rs;
  std::vector<Complex> ps;
  auto observe = [&](const State& y, double r) {
    if (r >= a0) {
      rs.push_back(r);
      ps.emplace_back(y[0], y[1]);
    }
  };
  auto stepper =
      ode::make_dense_output(opt.tolerance, opt.tolerance, ode::runge_kutta_dopri5<State>());
  ode::integrate_times(stepper, sys, x, times.begin(), times.end(), 1e-3 * r0, observe);
  for (const auto& v : ps) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw NumericFault("zero-energy solution became non-finite");
    }
  }

  // complex least squares psi = A phi1 + B phi2, where the basis carries the
  // first correction from a q ~ Q r^-6 tail beyond the window:
  // phi1 = r + Q / (12 r^3), phi2 = 1 + Q / (20 r^4)
  const double rq = opt.r_max;
  const Complex Q = q(rq) * std::pow(rq, 6.0);
  auto phi1 = [Q](double r) { return r + Q / (12.0 * r * r * r); };
  auto phi2 = [Q](double r) { return 1.0 + Q / (20.0 * r * r * r * r); };
  Complex g11 = 0.0, g12 = 0.0, g22 = 0.0, b1 = 0.0, b2 = 0.0;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const Complex f1 = phi1(rs[i]), f2 = phi2(rs[i]);
    g11 += std::conj(f1) * f1;
    g12 += std::conj(f1) * f2;
    g22 += std::conj(f2) * f2;
    b1 += std::conj(f1) * ps[i];
    b2 += std::conj(f2) * ps[i];
  }
  const Complex det = g11 * g22 - g12 * std::conj(g12);
  const Complex A = (g22 * b1 - g12 * b2) / det;
  const Complex B = (g11 * b2 - std::conj(g12) * b1) / det;
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    worst = std::max(worst, std::abs(ps[i] - (A * phi1(rs[i]) + B * phi2(rs[i]))));
    scale = std::max(scale, std::abs(ps[i]));
  }
  NumericScattering out;
  out.fit_residual = worst / scale;
  if (std::abs(A) * opt.r_max <= 1e-12 * std::abs(B)) {
    out.free_particle = true;
    out.a = Complex(std::numeric_limits<double>::infinity(), 0.0);
    return out;
  }
  if (out.fit_residual > opt.max_fit_residual) {
    throw NumericFault("zero-energy tail is not linear yet (fit residual " +
                       std::to_string(out.fit_residual) + "); increase r_max");
  }
  out.a = -B / A;
  return out;
}

NumericScattering scattering_length_numeric(const PolaritonParams& p,
                                            const ScatteringOptions& opt) {
  p.validate();
  const auto cb = require_blockade(p);
  const auto q = scaled_potential(p, cb);
  auto res = zero_energy_scattering([q](double s) { return q(s); }, opt);
  if (!res.free_particle) res.a *= cb.r_b;
  return res;
}

PolaritonParams with_kappa_rb(const PolaritonParams& p, double kappa_rb) {
  if (!(kappa_rb > 0.0)) throw DomainError("kappa r_b must be positive");
  const auto cb = require_blockade(p);
  const double r_b = kappa_rb / kappa(p);
  PolaritonParams out = p;
  out.C6 = std::copysign(std::pow(r_b, 6.0) / std::abs(cb.chi), p.C6);
  return out;
}

std::vector<ScanRow> polariton_scan(const PolaritonParams& p, const std::vector<double>& kappa_rb,
                                    const ScatteringOptions& opt) {
  std::vector<ScanRow> rows;
  rows.reserve(kappa_rb.size());
  for (double k : kappa_rb) {
    const auto q = with_kappa_rb(p, k);
    const Complex m = effective_mass(q);
    ScanRow row;
    row.kappa_rb = k;
    row.inv_ma_num = 1.0 / (m * scattering_length_numeric(q, opt).a);
    row.inv_ma_sq = 1.0 / (m * scattering_length_square_well(q));
    rows.push_back(row);
  }
  return rows;
}

double find_im_zero_crossing(const std::function<Complex(double)>& f, double lo, double hi,
                             double rel_tol) {
  if (!(lo < hi)) throw DomainError("bracket must satisfy lo < hi");
  Complex flo = f(lo);
  const Complex fhi = f(hi);
  if (flo.imag() == 0.0) return lo;
  if (fhi.imag() == 0.0) return hi;
  if ((flo.imag() > 0.0) == (fhi.imag() > 0.0)) {
    throw DomainError("no sign change of the imaginary part in the bracket");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const Complex fm = f(mid);
    if (std::abs(fm.imag()) < rel_tol * std::abs(fm.real())) return mid;
    if (mid <= lo || mid >= hi) return mid;
    if ((fm.imag() > 0.0) == (flo.imag() > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double find_lossless_point(const PolaritonParams& p, double lo, double hi,
                           const ScatteringOptions& opt) {
  p.validate();
  auto f = [&](double k) {
    const auto q = with_kappa_rb(p, k);
    return 1.0 / (effective_mass(q) * scattering_length_numeric(q, opt).a);
  };
  return find_im_zero_crossing(f, lo, hi);
}

}  // namespace qdiff
