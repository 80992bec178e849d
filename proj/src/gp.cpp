#include "qdiff/gp.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <thread>
#include <tuple>

#include "qdiff/errors.hpp"

namespace qdiff {

namespace {

std::size_t step_count(double duration, double dt, const char* what) {
  const double r = duration / dt;
  const double n = std::round(r);
  if (std::abs(r - n) > 1e-9 * std::max(1.0, r)) {
    throw DomainError(std::string(what) + " must be an integer multiple of dt");
  }
  return static_cast<std::size_t>(n);
}

std::string format_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

void GpConfig::validate() const {
  if (!std::isfinite(lambda) || lambda < 0.0) throw DomainError("lambda must be >= 0");
  if (!(dt > 0.0) || dt > kMaxDt) throw DomainError("dt must lie in (0, 0.5]");
  if (!(t_max >= 0.0) || !std::isfinite(t_max)) throw DomainError("t_max must be >= 0");
  if (!(snapshot_every > 0.0)) throw DomainError("snapshot interval must be positive");
  step_count(snapshot_every, dt, "snapshot interval");
  if (const auto* f = std::get_if<ComplexField>(&ic)) {
    if (!(f->grid == grid)) throw DomainError("initial field does not match the grid");
    if (!f->all_finite()) throw DomainError("initial field is not finite");
  } else {
    const auto& g = std::get<GaussianIc>(ic);
    if (!(g.w > 0.0)) throw DomainError("bump width must be positive");
    if (!(g.h > -1.0)) throw DomainError("bump height must exceed -1");
  }
  if (stop_below && !(*stop_below > 0.0)) throw DomainError("stop threshold must be positive");
}

GpState GpConfig::initial_state() const {
  if (const auto* f = std::get_if<ComplexField>(&ic)) return GpState{*f, 0.0};
  const auto& g = std::get<GaussianIc>(ic);
  return gaussian_bump_state(grid, g.h, g.w);
}

GpStepper::GpStepper(const Grid1D& grid, double lambda, double dt, bool nonlinear)
    : lambda_(lambda),
      dt_(dt),
      nonlinear_(nonlinear),
      fft_(grid.size()),
      propagator_(grid.size()),
      density_(grid.size()) {
  // exp(-i (1 - i lambda) k^2 dt / 2), with the 1/n of the inverse folded in
  const double inv_n = 1.0 / static_cast<double>(grid.size());
  const Complex coeff(0.0, -1.0);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double k = grid.wavenumber(j);
    const Complex a = coeff * Complex(1.0, -lambda) * (0.5 * k * k * dt);
    propagator_[j] = std::exp(a) * inv_n;
  }
}

void GpStepper::rotate(std::span<Complex> psi, double duration) const noexcept {
  if (!nonlinear_) return;
  // exact solution of i psi_t = 2 |psi|^2 psi over `duration`
  for (auto& p : psi) {
    const double phi = -2.0 * std::norm(p) * duration;
    p *= Complex(std::cos(phi), std::sin(phi));
  }
}

void GpStepper::kinetic(std::span<Complex> psi) noexcept {
  auto buf = fft_.buffer();
  std::copy(psi.begin(), psi.end(), buf.begin());
  fft_.forward();
  for (std::size_t j = 0; j < buf.size(); ++j) buf[j] *= propagator_[j];
  fft_.backward();
  std::copy(buf.begin(), buf.end(), psi.begin());
}

void GpStepper::refresh_density(std::span<const Complex> psi) {
  for (std::size_t j = 0; j < psi.size(); ++j) density_[j] = std::norm(psi[j]);
}

void GpStepper::step(GpState& s) { advance(s, 1); }

GpState step_gp(const GpState& state, const GpConfig& cfg) {
  if (!(state.psi.grid == cfg.grid)) throw DomainError("state does not match the grid");
  if (!(cfg.dt > 0.0) || cfg.dt > GpConfig::kMaxDt) throw DomainError("dt must lie in (0, 0.5]");
  if (!state.psi.all_finite()) throw NumericFault("non-finite input state");
  GpStepper stepper(cfg.grid, cfg.lambda, cfg.dt, cfg.nonlinearity_on);
  GpState out = state;
  stepper.step(out);
  if (!out.psi.all_finite()) throw NumericFault("non-finite state after step");
  return out;
}

namespace {

GpSnapshot make_snapshot(const GpState& s) {
  GpSnapshot snap{s.t, {}, {}};
  snap.rho.resize(s.psi.size());
  snap.theta.resize(s.psi.size());
  for (std::size_t j = 0; j < s.psi.size(); ++j) {
    snap.rho[j] = std::norm(s.psi[j]);
    snap.theta[j] = std::arg(s.psi[j]);
  }
  return snap;
}

// Half-extent of the region where |rho - 1| exceeds tol.
double perturbation_extent(const Grid1D& grid, std::span<const double> rho, double tol) {
  double extent = 0.0;
  for (std::size_t j = 0; j < rho.size(); ++j) {
    if (std::abs(rho[j] - NaturalUnits::rho0) > tol) {
      extent = std::max(extent, std::abs(grid.x(j)));
    }
  }
  return extent;
}

}  // namespace

GpTrajectory run_gp(const GpConfig& cfg) {
  cfg.validate();
  GpState state = cfg.initial_state();
  GpTrajectory traj{cfg.grid, cfg.lambda, {}, {}, {}, {}, std::nullopt, state};

  const auto& grid = cfg.grid;
  const double kmax = std::numbers::pi / grid.dx();
  const double phase_max = 0.5 * kmax * kmax * cfg.dt;
  if (cfg.nonlinearity_on && phase_max >= std::numbers::pi &&
      cfg.lambda * std::numbers::pi < 4.0 * cfg.dt) {
    traj.warnings.push_back("kinetic phase k_max^2 dt/2 = " + format_num(phase_max) +
                            " exceeds pi with weak damping; split-step resonance may seed "
                            "spurious short-wave growth (reduce dt or increase dx)");
  }

  std::optional<double> margin = cfg.guard_margin;
  double guard_tol = 0.0;
  if (const auto* g = std::get_if<GaussianIc>(&cfg.ic)) {
    if (!margin) margin = 5.0 * g->w;
    guard_tol = 0.01 * std::abs(g->h);
  }
  const bool guard = cfg.stop_on_wrap && margin && guard_tol > 0.0;
  const double guard_limit = 0.5 * grid.length() - (margin ? *margin : 0.0);
  if (guard && guard_limit <= 0.0) {
    throw DomainError("domain too short for the wrap guard margin");
  }

  const std::size_t total = step_count(cfg.t_max, cfg.dt, "t_max") ;
  const std::size_t per_snap = step_count(cfg.snapshot_every, cfg.dt, "snapshot interval");
  const double dx = grid.dx();

  auto record = [&](double t, std::span<const double> rho) {
    double mn = rho[0], sum = 0.0;
    for (double r : rho) {
      mn = std::min(mn, r);
      sum += r;
    }
    traj.min_density_series.push_back({t, mn});
    traj.total_number_series.push_back({t, sum * dx});
    return mn;
  };

  {
    const auto rho0 = state.density();
    record(0.0, rho0.values);
  }
  if (cfg.keep_fields) traj.snapshots.push_back(make_snapshot(state));

  GpStepper stepper(grid, cfg.lambda, cfg.dt, cfg.nonlinearity_on);
  std::size_t done = 0;
  bool stopped = false;
  while (done < total && !stopped) {
    const std::size_t chunk = std::min(per_snap, total - done);
    const double t_start = state.t;
    std::size_t k = 0;
    const std::size_t taken =
        stepper.advance(state, chunk, [&](double, std::span<const double> rho) {
          ++k;
          // keep the clock on the integer step lattice
          const double t = t_start + static_cast<double>(k) * cfg.dt;
          const double mn = record(t, rho);
          if (!std::isfinite(mn)) throw NumericFault("non-finite density at t = " + format_num(t));
          if (cfg.stop_below && mn < *cfg.stop_below) {
            stopped = true;
            return false;
          }
          return true;
        });
    done += taken;
    state.t = static_cast<double>(done) * cfg.dt;

    const bool at_snapshot = (taken == per_snap) || done == total || stopped;
    if (!at_snapshot) continue;
    if (cfg.keep_fields) traj.snapshots.push_back(make_snapshot(state));
    if (guard) {
      const auto rho = state.density();
      if (perturbation_extent(grid, rho.values, guard_tol) > guard_limit) {
        traj.wrap_time = state.t;
        traj.warnings.push_back("perturbation reached the wrap guard at t = " +
                                format_num(state.t) + "; run stopped");
        stopped = true;
      }
    }
  }
  traj.final_state = std::move(state);
  return traj;
}

std::optional<double> detect_singularity_time(std::span<const SeriesPoint> series,
                                              double threshold) {
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (series[i].value < threshold) {
      if (i == 0) return series[0].t;
      const auto& a = series[i - 1];
      const auto& b = series[i];
      const double f = (a.value - threshold) / (a.value - b.value);
      return a.t + f * (b.t - a.t);
    }
  }
  return std::nullopt;
}

std::optional<double> detect_singularity_time(const GpTrajectory& traj, double threshold) {
  return detect_singularity_time(traj.min_density_series, threshold);
}

std::optional<double> rightmost_crossing(const Grid1D& grid, std::span<const double> rho,
                                         double level) {
  if (rho.size() != grid.size()) throw DomainError("density does not match grid");
  for (std::size_t j = rho.size() - 1; j-- > 0;) {
    if (rho[j] < level && rho[j + 1] >= level) {
      const double f = (level - rho[j]) / (rho[j + 1] - rho[j]);
      return grid.x(j) + f * grid.dx();
    }
  }
  return std::nullopt;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DomainError("fit inputs differ in length");
  const std::size_t n = x.size();
  if (n < 2) throw DomainError("line fit needs at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw DomainError("line fit abscissae are all equal");
  LineFit fit;
  fit.n = n;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (n > 2) {
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - (fit.intercept + fit.slope * x[i]);
      ss += r * r;
    }
    fit.slope_stderr = std::sqrt(ss / static_cast<double>(n - 2) / sxx);
  }
  return fit;
}

LineFit measure_front_speed(const GpTrajectory& traj, double delay) {
  const auto tau = detect_singularity_time(traj);
  if (!tau) throw DomainError("no front found: density never fell below one half");
  std::vector<double> ts, xs;
  for (const auto& snap : traj.snapshots) {
    if (snap.t <= *tau + delay) continue;
    if (const auto x = rightmost_crossing(traj.grid, snap.rho)) {
      ts.push_back(snap.t);
      xs.push_back(*x);
    }
  }
  if (ts.size() < 2) throw DomainError("no front found after the singularity");
  return fit_line(ts, xs);
}

std::vector<SweepPoint> scaling_sweep(std::span<const double> lambdas,
                                      std::span<const double> heights,
                                      std::span<const double> widths, const GpConfig& base,
                                      unsigned threads) {
  if (lambdas.empty()) throw DomainError("lambda list is empty");
  if (heights.empty() || widths.empty()) throw DomainError("height and width lists must be non-empty");
  std::vector<SweepPoint> points;
  for (double l : lambdas)
    for (double h : heights)
      for (double w : widths) points.push_back({l, h, w, std::nullopt, {}, {}});
  std::sort(points.begin(), points.end(), [](const SweepPoint& a, const SweepPoint& b) {
    return std::tie(a.lambda, a.h, a.w) < std::tie(b.lambda, b.h, b.w);
  });

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(points.size()));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      auto& p = points[i];
      try {
        GpConfig cfg = base;
        cfg.lambda = p.lambda;
        cfg.ic = GaussianIc{p.h, p.w};
        cfg.keep_fields = false;
        cfg.stop_below = 0.5;
        cfg.stop_on_wrap = true;
        cfg.guard_margin.reset();
        const auto traj = run_gp(cfg);
        p.warnings = traj.warnings;
        p.tau_sing = detect_singularity_time(traj);
        if (!p.tau_sing) {
          p.error = traj.wrap_time ? "wrap guard reached before the singularity"
                                   : "no singularity before t_max";
        }
      } catch (const std::exception& e) {
        p.error = e.what();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return points;
}

CollapseFit fit_collapse(std::span<const SweepPoint> points, double z_max) {
  std::vector<double> lz, ly;
  for (const auto& p : points) {
    const auto y = p.y();
    if (!y || !(p.z() > 0.0) || p.z() > z_max) continue;
    lz.push_back(std::log(p.z()));
    ly.push_back(std::log(*y));
  }
  CollapseFit out;
  const bool spread = lz.size() >= 2 &&
                      *std::max_element(lz.begin(), lz.end()) > *std::min_element(lz.begin(), lz.end());
  if (!spread) return out;
  out.fit = fit_line(lz, ly);
  out.degenerate = false;
  return out;
}

double collapse_spread(std::span<const SweepPoint> points) {
  // group by z, rounded so equal products of decimal inputs coincide
  std::map<long long, std::pair<double, double>> groups;
  for (const auto& p : points) {
    const auto y = p.y();
    if (!y) continue;
    const auto key = std::llround(p.z() * 1e9);
    auto [it, fresh] = groups.try_emplace(key, *y, *y);
    if (!fresh) {
      it->second.first = std::min(it->second.first, *y);
      it->second.second = std::max(it->second.second, *y);
    }
  }
  double worst = 0.0;
  for (const auto& [key, mm] : groups) worst = std::max(worst, (mm.second - mm.first) / mm.first);
  return worst;
}

}  // namespace qdiff
