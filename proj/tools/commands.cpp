#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "io.hpp"
#include "qdiff/errors.hpp"
#include "qdiff/field.hpp"
#include "qdiff/gp.hpp"
#include "qdiff/kpz.hpp"
#include "qdiff/polariton.hpp"
#include "qdiff/soliton.hpp"

namespace qdiff::cli {

namespace {

// Rejection by a validity rule of the model, as opposed to a malformed flag.
struct Rejected : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

double linf(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_deviation(std::span<const double> rho) {
  double m = 0.0;
  for (double r : rho) m = std::max(m, std::abs(r - NaturalUnits::rho0));
  return m;
}

void require_finite(const GpState& s) {
  if (!s.psi.all_finite()) throw NumericFault("GP field became non-finite");
}

// ---------------------------------------------------------------------------

struct GpFlags {
  double lambda = 2.0, h = 0.1, w = 15.0, dx = 0.2, dt = 0.1, length = 1000.0, t_max = 400.0,
         snapshot_every = 1.0;
  std::size_t x_stride = 1;
  bool linear = false;
};

void add_gp_flags(CLI::App* c, GpFlags& f) {
  c->add_option("--lambda", f.lambda, "loss strength")->capture_default_str();
  c->add_option("--h", f.h, "bump height")->capture_default_str();
  c->add_option("--w", f.w, "bump width")->capture_default_str();
  c->add_option("--dx", f.dx, "grid spacing")->capture_default_str();
  c->add_option("--dt", f.dt, "time step")->capture_default_str();
  c->add_option("--length", f.length, "domain length")->capture_default_str();
  c->add_option("--tmax", f.t_max, "end time")->capture_default_str();
  c->add_option("--snapshot-every", f.snapshot_every, "snapshot interval")->capture_default_str();
  c->add_option("--x-stride", f.x_stride, "write every n-th grid point")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
}

void record(Json& p, const GpFlags& f) {
  p["lambda"] = f.lambda;
  p["h"] = f.h;
  p["w"] = f.w;
  p["dx"] = f.dx;
  p["dt"] = f.dt;
  p["length"] = f.length;
  p["tmax"] = f.t_max;
  p["snapshot_every"] = f.snapshot_every;
  p["x_stride"] = f.x_stride;
}

GpConfig gp_config(const GpFlags& f) {
  if (!(f.dx > 0.0) || !(f.length > 0.0)) throw DomainError("dx and length must be positive");
  GpConfig cfg;
  cfg.lambda = f.lambda;
  cfg.dt = f.dt;
  cfg.t_max = f.t_max;
  cfg.snapshot_every = f.snapshot_every;
  cfg.grid = make_grid(f.length, f.dx);
  cfg.ic = GaussianIc{f.h, f.w};
  cfg.nonlinearity_on = !f.linear;
  cfg.validate();
  return cfg;
}

int cmd_gp(const GpFlags& f, const std::string& out) {
  const GpConfig cfg = gp_config(f);
  RunContext ctx("gp", out);
  record(ctx.parameters(), f);
  ctx.parameters()["linear"] = f.linear;

  const GpTrajectory traj = run_gp(cfg);
  require_finite(traj.final_state);
  ctx.warn_all(traj.warnings);

  {
    auto csv = ctx.csv("density.csv", {"t", "x", "rho", "theta"});
    for (const auto& s : traj.snapshots) {
      for (std::size_t j = 0; j < traj.grid.size(); j += f.x_stride) {
        csv.row({s.t, traj.grid.x(j), s.rho[j], s.theta[j]});
      }
    }
  }
  {
    auto csv = ctx.csv("series.csv", {"t", "min_rho", "total_number"});
    for (std::size_t i = 0; i < traj.min_density_series.size(); ++i) {
      csv.row({traj.min_density_series[i].t, traj.min_density_series[i].value,
               traj.total_number_series[i].value});
    }
  }

  Json summary = Json::object();
  const auto tau = detect_singularity_time(traj);
  if (tau) summary["tau_sing"] = *tau;
  if (tau) {
    try {
      const LineFit speed = measure_front_speed(traj);
      summary["front_speed"] = speed.slope;
      summary["front_speed_stderr"] = speed.slope_stderr;
      summary["front_speed_points"] = speed.n;
    } catch (const DomainError& e) {
      ctx.warn(std::string("front speed not measured: ") + e.what());
    }
  }
  summary["number_initial"] = traj.total_number_series.front().value;
  summary["number_final"] = traj.total_number_series.back().value;
  summary["t_final"] = traj.final_state.t;
  summary["wrap_time"] = optional_json(traj.wrap_time);
  ctx.write_json("summary.json", summary);
  ctx.finish();
  return kOk;
}

// ---------------------------------------------------------------------------

struct KpzFlags {
  double lambda = 0.4, h = 0.05, w = 200.0, dx = 0.2, dt = 0.0, length = 6000.0, t_max = 600.0,
         snapshot_every = 10.0;
  std::size_t x_stride = 1;
  std::string scheme = "rk4";
};

KpzState kpz_initial(const Grid1D& grid, double h, double w) {
  RealField drho(grid);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.x(j);
    drho[j] = h * std::exp(-x * x / (w * w));
  }
  return kpz_init_from_density(drho);
}

KpzConfig kpz_config(const KpzFlags& f) {
  KpzConfig cfg;
  cfg.lambda = f.lambda;
  cfg.dt = f.dt;
  cfg.t_max = f.t_max;
  cfg.snapshot_every = f.snapshot_every;
  cfg.scheme = f.scheme == "characteristic" ? KpzScheme::Characteristic : KpzScheme::Rk4Central;
  return cfg;
}

int cmd_kpz(const KpzFlags& f, const std::string& out) {
  if (!(f.dx > 0.0) || !(f.length > 0.0)) throw DomainError("dx and length must be positive");
  const Grid1D grid = make_grid(f.length, f.dx);
  const KpzState init = kpz_initial(grid, f.h, f.w);
  const KpzConfig cfg = kpz_config(f);
  RunContext ctx("kpz", out);
  auto& p = ctx.parameters();
  p["lambda"] = f.lambda;
  p["h"] = f.h;
  p["w"] = f.w;
  p["dx"] = f.dx;
  p["dt"] = f.dt;
  p["length"] = f.length;
  p["tmax"] = f.t_max;
  p["snapshot_every"] = f.snapshot_every;
  p["x_stride"] = f.x_stride;
  p["scheme"] = f.scheme;

  const KpzTrajectory traj = run_kpz(init, cfg);
  {
    auto csv = ctx.csv("kpz.csv", {"t", "x", "rho", "theta"});
    for (const auto& s : traj.snapshots) {
      const auto rho = s.density();
      for (std::size_t j = 0; j < grid.size(); j += f.x_stride) {
        csv.row({s.t, grid.x(j), rho[j], s.theta[j]});
      }
    }
  }
  {
    auto csv = ctx.csv("rate.csv", {"t", "max_abs_theta_dot"});
    for (const auto& s : traj.rate_series) csv.row({s.t, s.value});
  }
  Json summary = {{"blowup_time", optional_json(traj.blowup_time)},
                  {"dt", traj.dt},
                  {"t_final", traj.final_state.t}};
  ctx.write_json("summary.json", summary);
  ctx.finish();
  return kOk;
}

// ---------------------------------------------------------------------------

struct CompareFlags {
  GpFlags gp{0.4, 0.05, 200.0, 0.2, 0.1, 8000.0, 1000.0, 10.0, 1, false};
  std::string scheme = "rk4";
  double agreement = 0.01;
};

int cmd_compare(const CompareFlags& f, const std::string& out) {
  const GpConfig cfg = gp_config(f.gp);
  KpzFlags kf;
  kf.lambda = f.gp.lambda;
  kf.t_max = f.gp.t_max;
  kf.snapshot_every = f.gp.snapshot_every;
  kf.scheme = f.scheme;
  const KpzConfig kcfg = kpz_config(kf);
  const KpzState kinit = kpz_initial(cfg.grid, f.gp.h, f.gp.w);

  RunContext ctx("compare", out);
  record(ctx.parameters(), f.gp);
  ctx.parameters()["scheme"] = f.scheme;
  ctx.parameters()["agreement"] = f.agreement;

  const GpTrajectory gp = run_gp(cfg);
  require_finite(gp.final_state);
  ctx.warn_all(gp.warnings);
  const KpzTrajectory kpz = run_kpz(kinit, kcfg);
  const Grid1D& grid = cfg.grid;

  Json summary = Json::object();
  std::optional<double> first_disagreement;
  double deviation_at_disagreement = 0.0;
  {
    auto overlay = ctx.csv("overlay.csv", {"t", "x", "rho_gp", "rho_kpz"});
    auto series = ctx.csv("disagreement.csv", {"t", "linf", "max_drho_gp", "max_drho_kpz"});
    const std::size_t n = std::min(gp.snapshots.size(), kpz.snapshots.size());
    for (std::size_t i = 0; i < n; ++i) {
      const auto& g = gp.snapshots[i];
      const auto rk = kpz.snapshots[i].density();
      if (std::abs(g.t - kpz.snapshots[i].t) > 1e-9 * std::max(1.0, g.t)) {
        throw NumericFault("GP and KPZ snapshot times drifted apart");
      }
      const double d = linf(g.rho, rk);
      const double dev = max_deviation(g.rho);
      series.row({g.t, d, dev, max_deviation(rk)});
      if (!first_disagreement && d >= f.agreement) {
        first_disagreement = g.t;
        deviation_at_disagreement = dev;
      }
      for (std::size_t j = 0; j < grid.size(); j += f.gp.x_stride) {
        overlay.row({g.t, grid.x(j), g.rho[j], rk[j]});
      }
    }
  }
  const auto tau = detect_singularity_time(gp);
  summary["tau_sing"] = optional_json(tau);
  summary["kpz_blowup_time"] = optional_json(kpz.blowup_time);
  if (tau && kpz.blowup_time) {
    summary["blowup_offset_ratio"] = std::abs(*kpz.blowup_time - *tau) / *tau;
  }
  summary["first_disagreement_time"] = optional_json(first_disagreement);
  if (first_disagreement) summary["max_drho_at_disagreement"] = deviation_at_disagreement;

  // the front panel only exists once the condensate has been depleted
  if (tau && f.gp.lambda > 0.0 && !gp.snapshots.empty() && gp.snapshots.back().t > *tau) {
    const auto& last = gp.snapshots.back();
    const FrontFit fit = fit_front(grid, last.rho, f.gp.lambda);
    const std::vector<double> xs = grid.coordinates();
    const SolitonProfile prof = sonic_profile(xs, fit.z0, f.gp.lambda);
    auto csv = ctx.csv("soliton.csv", {"x", "rho_gp", "rho_soliton"});
    for (std::size_t j = 0; j < grid.size(); j += f.gp.x_stride) {
      csv.row({xs[j], last.rho[j], prof.rho[j]});
    }
    summary["soliton"] = {{"t", last.t},
                          {"z0", fit.z0},
                          {"mismatch", fit.mismatch},
                          {"window_points", fit.window_points}};
  }
  ctx.write_json("summary.json", summary);
  ctx.finish();
  return kOk;
}

// ---------------------------------------------------------------------------

struct SolitonFlags {
  std::string u = "c";
  double lambda = 0.4;
  double z0 = 0.0;
  std::optional<double> z_min, z_max, dz;
};

int cmd_soliton(const SolitonFlags& f, const std::string& out) {
  const double u = parse_speed(f.u);
  if (!(f.lambda > 0.0)) throw DomainError("lambda must be positive");
  const SpeedClass cls = classify_speed(u);
  if (cls == SpeedClass::Invalid) {
    throw Rejected("u = " + f.u +
                   " has no valid soliton: dz/dv vanishes on both velocity branches, so "
                   "solutions exist only for |u| >= c = sqrt(2)");
  }
  const double half = 40.0 / f.lambda;
  const double lo = f.z_min.value_or(f.z0 - half);
  const double hi = f.z_max.value_or(f.z0 + half);
  const double dz = f.dz.value_or(0.01 / f.lambda);
  if (!(hi > lo) || !(dz > 0.0)) throw DomainError("need z-min < z-max and dz > 0");
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / dz + 1e-9)) + 1;
  if (n < 7) throw DomainError("profile needs at least 7 samples");
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = lo + dz * static_cast<double>(i);

  const bool sonic = std::abs(std::abs(u) - kSoundSpeed) <= 1e-12 * kSoundSpeed && u > 0.0;
  const SolitonProfile prof = sonic ? sonic_profile(z, f.z0, f.lambda)
                                    : general_profile(u, z, f.z0, f.lambda);

  RunContext ctx("soliton", out);
  auto& p = ctx.parameters();
  p["u"] = f.u;
  p["lambda"] = f.lambda;
  p["z0"] = f.z0;
  p["z_min"] = lo;
  p["z_max"] = hi;
  p["dz"] = dz;
  {
    auto csv = ctx.csv("profile.csv", {"z", "v", "rho"});
    for (std::size_t i = 0; i < n; ++i) csv.row({prof.z[i], prof.v[i], prof.rho[i]});
  }
  Json summary = {{"u", u},
                  {"class", to_string(cls)},
                  {"rho_left", prof.rho.front()},
                  {"rho_right", prof.rho.back()}};
  if (dz <= 0.05 / f.lambda) {
    const HydroResidual r = hydro_residual(prof);
    summary["residual_continuity"] = r.continuity;
    summary["residual_euler"] = r.euler;
  } else {
    ctx.warn("residuals skipped: dz coarser than 0.05 / lambda");
  }
  if (sonic) summary["core_width"] = sonic_core_width(f.lambda);
  ctx.write_json("summary.json", summary);
  ctx.finish();
  return kOk;
}

// ---------------------------------------------------------------------------

struct SweepFlags {
  std::vector<double> lambdas{0.05, 0.1, 0.15, 0.2, 0.25, 0.3};
  std::vector<double> heights{0.1, 0.2};
  std::vector<double> widths{50.0, 100.0};
  double dx = 0.5, dt = 0.1, length = 10000.0, t_max = 3000.0, z_max = 1.0;
  unsigned threads = 0;
};

// Empty text gives an empty list, which the sweep rejects.
std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw DomainError("not a number in list: '" + item + "'");
    }
    if (used != item.size()) throw DomainError("not a number in list: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

int cmd_sweep(const SweepFlags& f, const std::string& out) {
  if (f.lambdas.empty() || f.heights.empty() || f.widths.empty()) {
    throw DomainError("lambda, height and width lists must be non-empty");
  }
  GpConfig base;
  base.dt = f.dt;
  base.t_max = f.t_max;
  base.snapshot_every = f.dt;
  if (!(f.dx > 0.0) || !(f.length > 0.0)) throw DomainError("dx and length must be positive");
  base.grid = make_grid(f.length, f.dx);
  base.validate();

  RunContext ctx("sweep", out);
  auto& p = ctx.parameters();
  p["lambdas"] = f.lambdas;
  p["heights"] = f.heights;
  p["widths"] = f.widths;
  p["dx"] = f.dx;
  p["dt"] = f.dt;
  p["length"] = f.length;
  p["tmax"] = f.t_max;
  p["z_max"] = f.z_max;

  const auto pts = scaling_sweep(f.lambdas, f.heights, f.widths, base, f.threads);
  std::size_t ok = 0;
  {
    auto csv = ctx.csv("collapse.csv", {"lambda", "h", "w", "tau_sing", "z", "y"});
    for (const auto& pt : pts) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      csv.row({pt.lambda, pt.h, pt.w, pt.tau_sing.value_or(nan), pt.z(), pt.y().value_or(nan)});
      if (pt.tau_sing) ++ok;
      const std::string tag = "lambda=" + format_number(pt.lambda) + " h=" + format_number(pt.h) +
                              " w=" + format_number(pt.w) + ": ";
      if (!pt.error.empty()) ctx.warn(tag + pt.error);
      for (const auto& w : pt.warnings) ctx.warn(tag + w);
    }
  }
  const CollapseFit fit = fit_collapse(pts, f.z_max);
  Json summary = {{"runs", pts.size()},
                  {"succeeded", ok},
                  {"slope", fit.fit.slope},
                  {"slope_stderr", fit.fit.slope_stderr},
                  {"intercept", fit.fit.intercept},
                  {"fit_points", fit.fit.n},
                  {"degenerate", fit.degenerate},
                  {"spread", collapse_spread(pts)}};
  if (fit.degenerate) ctx.warn("slope fit is degenerate (fewer than two distinct z <= z_max)");
  ctx.write_json("summary.json", summary);
  ctx.finish();
  return 5 * ok >= 4 * pts.size() ? kOk : kNumericFault;
}

// ---------------------------------------------------------------------------

struct PolaritonFlags {
  double delta_over_gamma = -10.0, omega_over_delta = 6.0, gamma = 1.0, g = 1000.0,
         c_light = 1.0;
  int c6_sign = 1;
  std::string scan = "3:8:26";
};

struct ScanRange {
  double lo, hi;
  std::size_t n;
};

ScanRange parse_scan(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(':', start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  if (parts.size() < 2 || parts.size() > 3) throw DomainError("scan must be LO:HI or LO:HI:N");
  ScanRange r{};
  try {
    r.lo = std::stod(parts[0]);
    r.hi = std::stod(parts[1]);
    r.n = parts.size() == 3 ? std::stoul(parts[2]) : 26;
  } catch (const std::exception&) {
    throw DomainError("scan bounds are not numbers: " + text);
  }
  if (!(r.lo > 0.0 && r.hi > r.lo) || r.n < 2) throw DomainError("scan needs 0 < LO < HI, N >= 2");
  return r;
}

int cmd_polariton(const PolaritonFlags& f, const std::string& out) {
  const ScanRange range = parse_scan(f.scan);
  if (f.c6_sign != 1 && f.c6_sign != -1) throw DomainError("c6-sign must be +1 or -1");
  PolaritonParams prm;
  prm.gamma = f.gamma;
  prm.delta = f.delta_over_gamma * f.gamma;
  prm.Omega = f.omega_over_delta * std::abs(prm.Delta());
  prm.g = f.g;
  prm.c_light = f.c_light;
  prm.C6 = f.c6_sign;
  prm.validate();

  RunContext ctx("polariton", out);
  auto& p = ctx.parameters();
  p["delta_over_gamma"] = f.delta_over_gamma;
  p["omega_over_delta"] = f.omega_over_delta;
  p["gamma"] = f.gamma;
  p["g"] = f.g;
  p["c_light"] = f.c_light;
  p["c6_sign"] = f.c6_sign;
  p["scan"] = f.scan;
  ctx.warn_all(prm.warnings());

  std::vector<double> ks(range.n);
  for (std::size_t i = 0; i < range.n; ++i) {
    ks[i] = range.lo + (range.hi - range.lo) * static_cast<double>(i) /
                           static_cast<double>(range.n - 1);
  }
  const auto rows = polariton_scan(prm, ks);

  std::optional<double> crossing;
  for (std::size_t i = 0; i + 1 < rows.size() && !crossing; ++i) {
    if ((rows[i].inv_ma_num.imag() > 0.0) != (rows[i + 1].inv_ma_num.imag() > 0.0)) {
      crossing = find_lossless_point(prm, rows[i].kappa_rb, rows[i + 1].kappa_rb);
    }
  }
  if (!crossing) ctx.warn("Im(1/ma) does not change sign on the scan");
  {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    auto csv = ctx.csv("scan.csv", {"kappa_rb", "re_inv_ma_num", "im_inv_ma_num", "re_inv_ma_sq",
                                    "im_inv_ma_sq", "crossing"});
    for (const auto& r : rows) {
      csv.row({r.kappa_rb, r.inv_ma_num.real(), r.inv_ma_num.imag(), r.inv_ma_sq.real(),
               r.inv_ma_sq.imag(), crossing.value_or(nan)});
    }
  }
  const Complex m = effective_mass(prm);
  const auto cb = chi_and_blockade(prm);
  Json summary = {{"crossing", optional_json(crossing)},
                  {"mass_re", m.real()},
                  {"mass_im", m.imag()},
                  {"chi_re", cb.chi.real()},
                  {"chi_im", cb.chi.imag()},
                  {"kappa", kappa(prm)},
                  {"one_body_lambda", one_body_lambda(prm.delta, prm.gamma)}};
  ctx.write_json("summary.json", summary);
  ctx.finish();
  return kOk;
}

}  // namespace

double parse_speed(const std::string& text) {
  std::string s = text;
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char ch) { return std::isspace(ch); }),
          s.end());
  if (s.empty()) throw DomainError("empty speed");
  double scale = 1.0;
  if (s.back() == 'c') {
    scale = kSoundSpeed;
    s.pop_back();
    if (s.empty() || s == "+") s = "1";
    if (s == "-") s = "-1";
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw DomainError("cannot parse speed: " + text);
  }
  if (used != s.size() || !std::isfinite(v)) throw DomainError("cannot parse speed: " + text);
  return v * scale;
}

int run(int argc, const char* const* argv) {
  CLI::App app{"Condensates with quantum-diffusive loss"};
  // "--h" is the bump height, so help is long-form only
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);
  std::string out;
  std::optional<long long> seed;

  GpFlags gpf;
  auto* gp = app.add_subcommand("gp", "dissipative GP run from a Gaussian bump");
  add_gp_flags(gp, gpf);
  gp->add_flag("--linear", gpf.linear, "switch the nonlinearity off");

  KpzFlags kf;
  auto* kpz = app.add_subcommand("kpz", "dispersive KPZ run from a Gaussian density bump");
  kpz->add_option("--lambda", kf.lambda)->capture_default_str();
  kpz->add_option("--h", kf.h)->capture_default_str();
  kpz->add_option("--w", kf.w)->capture_default_str();
  kpz->add_option("--dx", kf.dx)->capture_default_str();
  kpz->add_option("--dt", kf.dt, "step bound, 0 = largest stable")->capture_default_str();
  kpz->add_option("--length", kf.length)->capture_default_str();
  kpz->add_option("--tmax", kf.t_max)->capture_default_str();
  kpz->add_option("--snapshot-every", kf.snapshot_every)->capture_default_str();
  kpz->add_option("--x-stride", kf.x_stride)->capture_default_str()->check(CLI::PositiveNumber);
  kpz->add_option("--scheme", kf.scheme)
      ->check(CLI::IsMember({"rk4", "characteristic"}))
      ->capture_default_str();

  CompareFlags cf;
  auto* cmp = app.add_subcommand("compare", "GP against dispersive KPZ and the sonic soliton");
  add_gp_flags(cmp, cf.gp);
  cmp->add_option("--scheme", cf.scheme)
      ->check(CLI::IsMember({"rk4", "characteristic"}))
      ->capture_default_str();
  cmp->add_option("--agreement", cf.agreement, "L-inf level that counts as disagreement")
      ->capture_default_str();

  SolitonFlags sf;
  auto* sol = app.add_subcommand("soliton", "travelling front profile and residuals");
  sol->add_option("--u", sf.u, "front speed: c, -c, 0.5c or a number")->capture_default_str();
  sol->add_option("--lambda", sf.lambda)->capture_default_str();
  sol->add_option("--z0", sf.z0)->capture_default_str();
  sol->add_option("--z-min", sf.z_min);
  sol->add_option("--z-max", sf.z_max);
  sol->add_option("--dz", sf.dz);

  SweepFlags wf;
  auto* sw = app.add_subcommand("sweep", "singularity time over (lambda, h, w)");
  std::optional<std::string> lambdas, heights, widths;
  sw->add_option("--lambdas", lambdas, "comma list (default 0.05,0.1,0.15,0.2,0.25,0.3)");
  sw->add_option("--heights", heights, "comma list (default 0.1,0.2)");
  sw->add_option("--widths", widths, "comma list (default 50,100)");
  sw->add_option("--dx", wf.dx)->capture_default_str();
  sw->add_option("--dt", wf.dt)->capture_default_str();
  sw->add_option("--length", wf.length)->capture_default_str();
  sw->add_option("--tmax", wf.t_max)->capture_default_str();
  sw->add_option("--z-max", wf.z_max, "upper end of the slope fit")->capture_default_str();
  sw->add_option("--threads", wf.threads, "0 = available processors")->capture_default_str();

  PolaritonFlags pf;
  auto* pol = app.add_subcommand("polariton", "Rydberg polariton scattering scan");
  pol->add_option("--delta-over-gamma", pf.delta_over_gamma)->capture_default_str();
  pol->add_option("--omega-over-delta", pf.omega_over_delta, "Omega / |Delta|")
      ->capture_default_str();
  pol->add_option("--gamma", pf.gamma)->capture_default_str();
  pol->add_option("--g", pf.g)->capture_default_str();
  pol->add_option("--c-light", pf.c_light)->capture_default_str();
  pol->add_option("--c6-sign", pf.c6_sign)->capture_default_str();
  pol->add_option("--scan", pf.scan, "kappa r_b range LO:HI[:N]")->capture_default_str();

  for (auto* c : {gp, kpz, cmp, sol, sw, pol}) {
    c->add_option("--out", out, "output directory");
    c->add_option("--seed", seed, "reserved; all dynamics are deterministic");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    for (auto* c : {gp, kpz, cmp, sol, sw, pol}) {
      if (*c && out.empty()) out = "out/" + c->get_name();
    }
    if (*gp) return cmd_gp(gpf, out);
    if (*kpz) return cmd_kpz(kf, out);
    if (*cmp) return cmd_compare(cf, out);
    if (*sol) return cmd_soliton(sf, out);
    if (*sw) {
      if (lambdas) wf.lambdas = parse_list(*lambdas);
      if (heights) wf.heights = parse_list(*heights);
      if (widths) wf.widths = parse_list(*widths);
      return cmd_sweep(wf, out);
    }
    if (*pol) return cmd_polariton(pf, out);
  } catch (const Rejected& e) {
    std::cerr << "rejected: " << e.what() << '\n';
    return kRejected;
  } catch (const DomainError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericFault& e) {
    std::cerr << "numeric fault: " << e.what() << '\n';
    return kNumericFault;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kUsage;
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace qdiff::cli
