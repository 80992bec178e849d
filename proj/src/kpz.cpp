#include "qdiff/kpz.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include "qdiff/errors.hpp"

namespace qdiff {

RealField KpzState::density() const {
  RealField rho(theta_dot.grid);
  for (std::size_t j = 0; j < rho.size(); ++j) rho[j] = NaturalUnits::rho0 - 0.5 * theta_dot[j];
  return rho;
}

std::vector<double> KpzSnapshot::density() const {
  std::vector<double> rho(theta_dot.size());
  for (std::size_t j = 0; j < rho.size(); ++j) rho[j] = NaturalUnits::rho0 - 0.5 * theta_dot[j];
  return rho;
}

KpzState kpz_init_from_density(const RealField& delta_rho) {
  KpzState s{RealField(delta_rho.grid), RealField(delta_rho.grid), 0.0};
  for (std::size_t j = 0; j < delta_rho.size(); ++j) {
    const double d = delta_rho[j];
    if (!(std::abs(d) < NaturalUnits::rho0)) {
      throw DomainError("density variation must stay below rho0 in magnitude");
    }
    s.theta_dot[j] = -2.0 * d;
  }
  return s;
}

double kpz_max_dt(const Grid1D& grid) noexcept { return 0.5 * grid.dx() / kSoundSpeed; }

namespace {

constexpr double kCflSlack = 1e-12;

// Workspace for RK4 stages.
class Rk4Central {
 public:
  Rk4Central(std::size_t n, double dx, double lambda)
      : n_(n), dx_(dx), lambda_(lambda), k_th_(4, std::vector<double>(n)),
        k_td_(4, std::vector<double>(n)), th_(n), td_(n) {}

  void step(std::vector<double>& theta, std::vector<double>& theta_dot, double dt) {
    rhs(theta, theta_dot, 0);
    stage(theta, theta_dot, 0, 0.5 * dt);
    rhs(th_, td_, 1);
    stage(theta, theta_dot, 1, 0.5 * dt);
    rhs(th_, td_, 2);
    stage(theta, theta_dot, 2, dt);
    rhs(th_, td_, 3);
    const double w = dt / 6.0;
    for (std::size_t j = 0; j < n_; ++j) {
      theta[j] += w * (k_th_[0][j] + 2.0 * k_th_[1][j] + 2.0 * k_th_[2][j] + k_th_[3][j]);
      theta_dot[j] += w * (k_td_[0][j] + 2.0 * k_td_[1][j] + 2.0 * k_td_[2][j] + k_td_[3][j]);
    }
  }

 private:
  void stage(const std::vector<double>& th, const std::vector<double>& td, int k, double h) {
    for (std::size_t j = 0; j < n_; ++j) {
      th_[j] = th[j] + h * k_th_[k][j];
      td_[j] = td[j] + h * k_td_[k][j];
    }
  }

  void rhs(const std::vector<double>& th, const std::vector<double>& td, int k) {
    const double c2 = kSoundSpeed * kSoundSpeed;
    const double inv_dx2 = 1.0 / (dx_ * dx_);
    const double inv_2dx = 0.5 / dx_;
    auto& dth = k_th_[k];
    auto& dtd = k_td_[k];
    for (std::size_t j = 0; j < n_; ++j) {
      const std::size_t jp = (j + 1 == n_) ? 0 : j + 1;
      const std::size_t jm = (j == 0) ? n_ - 1 : j - 1;
      const double lap = (th[jp] - 2.0 * th[j] + th[jm]) * inv_dx2;
      const double grad = (th[jp] - th[jm]) * inv_2dx;
      dth[j] = td[j];
      dtd[j] = c2 * lap + 2.0 * lambda_ * grad * grad;
    }
  }

  std::size_t n_;
  double dx_;
  double lambda_;
  std::vector<std::vector<double>> k_th_, k_td_;
  std::vector<double> th_, td_;
};

// Riemann-variable scheme at Courant number one.
class Characteristic {
 public:
  Characteristic(const KpzState& s, double lambda)
      : n_(s.theta.size()), dt_(s.theta.grid.dx() / kSoundSpeed), lambda_(lambda),
        rp_(n_), rm_(n_), tmp_(n_) {
    const auto grad = derivative(s.theta, 1);
    for (std::size_t j = 0; j < n_; ++j) {
      rp_[j] = s.theta_dot[j] + kSoundSpeed * grad[j];
      rm_[j] = s.theta_dot[j] - kSoundSpeed * grad[j];
    }
  }

  double dt() const noexcept { return dt_; }

  void step(std::vector<double>& theta, std::vector<double>& theta_dot) {
    source(0.5 * dt_);
    // R+ moves left, R- moves right, one cell each
    std::rotate_copy(rp_.begin(), rp_.begin() + 1, rp_.end(), tmp_.begin());
    rp_.swap(tmp_);
    std::rotate_copy(rm_.begin(), rm_.end() - 1, rm_.end(), tmp_.begin());
    rm_.swap(tmp_);
    source(0.5 * dt_);
    for (std::size_t j = 0; j < n_; ++j) {
      const double td = 0.5 * (rp_[j] + rm_[j]);
      theta[j] += 0.5 * dt_ * (theta_dot[j] + td);
      theta_dot[j] = td;
    }
  }

 private:
  // R+ - R- is untouched by the source, so the substep is exact.
  void source(double h) {
    const double s = 0.25 * lambda_ * h;
    for (std::size_t j = 0; j < n_; ++j) {
      const double d = rp_[j] - rm_[j];
      const double add = s * d * d;
      rp_[j] += add;
      rm_[j] += add;
    }
  }

  std::size_t n_;
  double dt_;
  double lambda_;
  std::vector<double> rp_, rm_, tmp_;
};

void check_finite(const KpzState& s) {
  if (!s.theta.all_finite() || !s.theta_dot.all_finite()) {
    throw NumericFault("non-finite KPZ state");
  }
}

}  // namespace

KpzState step_kpz(const KpzState& state, double dt, double lambda) {
  if (!(state.theta.grid == state.theta_dot.grid)) throw DomainError("fields on different grids");
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  if (dt > kpz_max_dt(state.theta.grid) * (1.0 + kCflSlack)) {
    throw DomainError("CFL violation: dt exceeds 0.5 dx / c");
  }
  check_finite(state);
  KpzState out = state;
  Rk4Central rk(out.theta.size(), out.theta.grid.dx(), lambda);
  rk.step(out.theta.values, out.theta_dot.values, dt);
  out.t += dt;
  return out;
}

KpzTrajectory run_kpz(const KpzState& initial, const KpzConfig& cfg) {
  const auto& grid = initial.theta.grid;
  if (!(initial.theta_dot.grid == grid)) throw DomainError("fields on different grids");
  if (!std::isfinite(cfg.lambda)) throw DomainError("lambda must be finite");
  if (!(cfg.t_max >= 0.0)) throw DomainError("t_max must be >= 0");
  if (!(cfg.snapshot_every > 0.0)) throw DomainError("snapshot interval must be positive");
  if (!(cfg.blowup_threshold > 0.0)) throw DomainError("blow-up threshold must be positive");
  if (cfg.dt < 0.0) throw DomainError("dt must be >= 0");
  check_finite(initial);

  double dt = 0.0;
  if (cfg.scheme == KpzScheme::Rk4Central) {
    const double cap = kpz_max_dt(grid);
    double dt_max = cfg.dt > 0.0 ? cfg.dt : cap;
    if (dt_max > cap * (1.0 + kCflSlack)) throw DomainError("CFL violation: dt exceeds 0.5 dx / c");
    dt = cfg.snapshot_every / std::ceil(cfg.snapshot_every / dt_max - 1e-9);
  } else {
    dt = grid.dx() / kSoundSpeed;
    if (cfg.dt > 0.0 && std::abs(cfg.dt - dt) > 1e-12 * dt) {
      throw DomainError("characteristic scheme runs at dt = dx / c");
    }
  }

  KpzState state = initial;
  KpzTrajectory traj{grid, cfg.lambda, dt, {}, {}, std::nullopt, initial};
  auto snapshot = [&] {
    if (cfg.keep_fields) traj.snapshots.push_back({state.t, state.theta.values, state.theta_dot.values});
  };
  snapshot();

  std::optional<Rk4Central> rk;
  std::optional<Characteristic> ch;
  if (cfg.scheme == KpzScheme::Rk4Central) {
    rk.emplace(grid.size(), grid.dx(), cfg.lambda);
  } else {
    ch.emplace(state, cfg.lambda);
  }

  const auto total = static_cast<std::size_t>(std::floor(cfg.t_max / dt + 1e-9));
  std::size_t next_snap = 1;
  const double t0 = state.t;
  for (std::size_t k = 1; k <= total; ++k) {
    if (rk) {
      rk->step(state.theta.values, state.theta_dot.values, dt);
    } else {
      ch->step(state.theta.values, state.theta_dot.values);
    }
    state.t = t0 + static_cast<double>(k) * dt;
    double peak = 0.0;
    bool bad = false;
    for (double v : state.theta_dot.values) {
      if (!std::isfinite(v)) {
        bad = true;
        break;
      }
      peak = std::max(peak, std::abs(v));
    }
    traj.rate_series.push_back({state.t, bad ? std::numeric_limits<double>::infinity() : peak});
    if (bad || peak > cfg.blowup_threshold) {
      traj.blowup_time = state.t;
      break;
    }
    if (state.t - t0 >= static_cast<double>(next_snap) * cfg.snapshot_every - 1e-9 * dt) {
      snapshot();
      ++next_snap;
    }
  }
  traj.final_state = std::move(state);
  return traj;
}

// ---------------------------------------------------------------------------

RealField toy_wave_exact(const RealField& theta0, double t, double lambda) {
  if (!(t >= 0.0)) throw DomainError("time must be >= 0");
  double peak = -std::numeric_limits<double>::infinity();
  for (double v : theta0.values) peak = std::max(peak, v);
  if (lambda * peak > 0.0 && t >= 1.0 / (lambda * peak)) {
    throw DomainError("evaluation at or after the blow-up time");
  }
  RealField out(theta0.grid);
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double s = interpolate_periodic(theta0, theta0.grid.x(j) + t);
    out[j] = s / (1.0 - lambda * s * t);
  }
  return out;
}

namespace {

void toy_step(std::vector<double>& th, std::vector<double>& tmp, double nu, double lambda,
              double h) {
  const std::size_t n = th.size();
  for (std::size_t j = 0; j < n; ++j) {
    const double right = th[(j + 1 == n) ? 0 : j + 1];
    tmp[j] = th[j] + nu * (right - th[j]);
  }
  auto f = [lambda](double v) { return lambda * v * v; };
  for (std::size_t j = 0; j < n; ++j) {
    const double y = tmp[j];
    const double k1 = f(y);
    const double k2 = f(y + 0.5 * h * k1);
    const double k3 = f(y + 0.5 * h * k2);
    const double k4 = f(y + h * k3);
    th[j] = y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
}

}  // namespace

RealField toy_wave_numeric(const RealField& theta0, double lambda, double dt, double t) {
  const double dx = theta0.grid.dx();
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  if (dt > dx * (1.0 + kCflSlack)) throw DomainError("CFL violation: dt exceeds dx");
  if (!(t >= 0.0)) throw DomainError("time must be >= 0");
  RealField out = theta0;
  if (t == 0.0) return out;
  const double steps = std::ceil(t / dt - 1e-9);
  const double h = t / steps;
  std::vector<double> tmp(out.size());
  for (long k = 0; k < static_cast<long>(steps); ++k) {
    toy_step(out.values, tmp, h / dx, lambda, h);
  }
  if (!out.all_finite()) throw NumericFault("toy wave diverged before the requested time");
  return out;
}

std::optional<double> toy_wave_blowup_time(const RealField& theta0, double lambda, double dt,
                                           double t_max, double threshold) {
  const double dx = theta0.grid.dx();
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  if (dt > dx * (1.0 + kCflSlack)) throw DomainError("CFL violation: dt exceeds dx");
  std::vector<double> th = theta0.values, tmp(th.size());
  const auto total = static_cast<long>(std::floor(t_max / dt + 1e-9));
  for (long k = 1; k <= total; ++k) {
    toy_step(th, tmp, dt / dx, lambda, dt);
    for (double v : th) {
      if (!std::isfinite(v) || std::abs(v) > threshold) return static_cast<double>(k) * dt;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

namespace {

using OdeState = std::array<double, 4>;  // a, a_dot, b, b_dot

struct ParabolaSystem {
  double lambda;
  void operator()(const OdeState& x, OdeState& dxdt, double) const {
    dxdt[0] = x[1];
    dxdt[1] = 8.0 * lambda * x[0] * x[0];
    dxdt[2] = x[3];
    dxdt[3] = 4.0 * x[0];
  }
};

constexpr double kOdeTol = 1e-10;

OdeState to_ode(const ParabolaCoeffs& c) { return {c.a, c.a_dot, c.b, c.b_dot}; }
ParabolaCoeffs from_ode(const OdeState& x) { return {x[0], x[2], x[1], x[3]}; }

}  // namespace

double parabola_energy(const ParabolaCoeffs& c, double lambda) noexcept {
  return 0.5 * c.a_dot * c.a_dot - (8.0 / 3.0) * lambda * c.a * c.a * c.a;
}

ParabolaCoeffs parabola_evolve(const ParabolaCoeffs& c, double t, double lambda) {
  namespace ode = boost::numeric::odeint;
  if (!(t >= 0.0)) throw DomainError("time must be >= 0");
  const bool divergent = lambda > 0.0 && !(c.a == 0.0 && c.a_dot == 0.0) &&
                         !(parabola_energy(c, lambda) == 0.0 && c.a_dot < 0.0);
  if (divergent && t >= parabola_blowup_time(c, lambda)) {
    throw DomainError("parabola diverges before the requested time");
  }
  OdeState x = to_ode(c);
  if (t == 0.0) return c;
  auto stepper = ode::make_controlled(kOdeTol, kOdeTol, ode::runge_kutta_dopri5<OdeState>());
  ode::integrate_adaptive(stepper, ParabolaSystem{lambda}, x, 0.0, t, std::min(1e-3, t));
  return from_ode(x);
}

double parabola_escape_time(const ParabolaCoeffs& c, double lambda, double escape) {
  namespace ode = boost::numeric::odeint;
  if (c.a > escape) return 0.0;
  auto stepper = ode::make_dense_output(kOdeTol, kOdeTol, ode::runge_kutta_dopri5<OdeState>());
  stepper.initialize(to_ode(c), 0.0, 1e-4);
  constexpr long kMaxSteps = 50'000'000;
  for (long k = 0; k < kMaxSteps; ++k) {
    const auto [t0, t1] = stepper.do_step(ParabolaSystem{lambda});
    const OdeState& x = stepper.current_state();
    if (!std::isfinite(x[0])) throw NumericFault("parabola integration became non-finite");
    if (x[0] > escape) {
      double lo = t0, hi = t1;
      OdeState mid{};
      for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
        const double m = 0.5 * (lo + hi);
        stepper.calc_state(m, mid);
        (mid[0] > escape ? hi : lo) = m;
      }
      return 0.5 * (lo + hi);
    }
  }
  throw NumericFault("parabola did not escape within the step budget");
}

double parabola_blowup_time(const ParabolaCoeffs& c, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("parabola diverges only for lambda > 0");
  if (c.a == 0.0 && c.a_dot == 0.0) throw DomainError("rest state never diverges");
  const double energy = parabola_energy(c, lambda);
  if (energy == 0.0 && c.a_dot < 0.0) {
    throw DomainError("zero-energy descent approaches a = 0 and never diverges");
  }
  // a(t) climbs out of the turning point a_t where E = U(a_t). With
  // a = a_t + u^2 the integrand 1 / sqrt(2 (E - U)) becomes smooth in u.
  const double k = 16.0 * lambda / 3.0;
  const double a_t = std::cbrt(c.a * c.a * c.a - 3.0 * c.a_dot * c.a_dot / (16.0 * lambda));
  const double u0 = std::sqrt(std::max(0.0, c.a - a_t));
  auto f = [&](double u) {
    const double a = a_t + u * u;
    return 2.0 / std::sqrt(k * (a * a + a * a_t + a_t * a_t));
  };
  const double tol = 1e-12;
  boost::math::quadrature::exp_sinh<double> tail;
  const double rest = tail.integrate(f, u0, std::numeric_limits<double>::infinity(), tol);
  if (c.a_dot >= 0.0) return rest;
  // descend to the turning point first, then climb back through a(0)
  const double descent =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, u0, 15, tol);
  return rest + 2.0 * descent;
}

// ---------------------------------------------------------------------------

namespace {

std::optional<double> difference_radius(const Grid1D& grid, std::span<const double> th_a,
                                        std::span<const double> td_a,
                                        std::span<const double> th_b,
                                        std::span<const double> td_b, double r0, double tol) {
  std::optional<double> radius;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (std::abs(th_a[j] - th_b[j]) > tol || std::abs(td_a[j] - td_b[j]) > tol) {
      const double r = std::abs(grid.x(j)) - r0;
      radius = radius ? std::max(*radius, r) : r;
    }
  }
  return radius;
}

}  // namespace

std::vector<CausalitySample> causality_radius_series(const KpzState& a, const KpzState& b,
                                                     const KpzConfig& cfg, double r0,
                                                     double tol) {
  if (!(a.theta.grid == b.theta.grid)) throw DomainError("states on different grids");
  KpzConfig c = cfg;
  c.keep_fields = true;
  const auto ta = run_kpz(a, c);
  const auto tb = run_kpz(b, c);
  const std::size_t count = std::min(ta.snapshots.size(), tb.snapshots.size());
  std::vector<CausalitySample> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto& sa = ta.snapshots[i];
    const auto& sb = tb.snapshots[i];
    out.push_back({sa.t, difference_radius(a.theta.grid, sa.theta, sa.theta_dot, sb.theta,
                                           sb.theta_dot, r0, tol)});
  }
  return out;
}

std::optional<double> causality_radius_check(const KpzState& a, const KpzState& b,
                                             const KpzConfig& cfg, double r0, double tol) {
  if (!(a.theta.grid == b.theta.grid)) throw DomainError("states on different grids");
  KpzConfig c = cfg;
  c.keep_fields = false;
  const auto ta = run_kpz(a, c);
  const auto tb = run_kpz(b, c);
  const auto& fa = ta.final_state;
  const auto& fb = tb.final_state;
  return difference_radius(a.theta.grid, fa.theta.values, fa.theta_dot.values, fb.theta.values,
                           fb.theta_dot.values, r0, tol);
}

}  // namespace qdiff
