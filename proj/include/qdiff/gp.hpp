#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qdiff/field.hpp"
#include "qdiff/spectral.hpp"

namespace qdiff {

struct GaussianIc {
  double h = 0.1;
  double w = 15.0;
};

/// Configuration of one dissipative Gross-Pitaevskii run.
struct GpConfig {
  double lambda = 2.0;
  double dt = 0.1;
  double t_max = 400.0;
  double snapshot_every = 1.0;
  Grid1D grid = make_grid(1000.0, 0.2);
  std::variant<GaussianIc, ComplexField> ic = GaussianIc{};
  bool nonlinearity_on = true;

  /// Store rho/theta at every snapshot. Sweeps only need the scalar series.
  bool keep_fields = true;
  /// Stop as soon as min rho drops below this value.
  std::optional<double> stop_below;
  /// Stop when the perturbation comes within `guard_margin` of the domain
  /// edge. Defaults to 5w for Gaussian initial data; disabled otherwise.
  bool stop_on_wrap = true;
  std::optional<double> guard_margin;

  static constexpr double kMaxDt = 0.5;

  /// Throws DomainError when a constraint is violated.
  void validate() const;
  GpState initial_state() const;
};

struct SeriesPoint {
  double t;
  double value;
};

struct GpSnapshot {
  double t;
  std::vector<double> rho;
  std::vector<double> theta;
};

struct GpTrajectory {
  Grid1D grid;
  double lambda = 0.0;
  std::vector<GpSnapshot> snapshots;
  std::vector<SeriesPoint> min_density_series;
  std::vector<SeriesPoint> total_number_series;
  std::vector<std::string> warnings;
  /// Time at which the wrap guard triggered, if it did.
  std::optional<double> wrap_time;
  GpState final_state;
};

/// Strang split stepper: half nonlinear rotation, exact kinetic propagation
/// in Fourier space, half nonlinear rotation.
class GpStepper {
 public:
  GpStepper(const Grid1D& grid, double lambda, double dt, bool nonlinear = true);

  double dt() const noexcept { return dt_; }

  /// One full Strang step.
  void step(GpState& s);

  /// `steps` Strang steps with adjacent half rotations fused. `on_step` is
  /// called after every kinetic substep with the current |psi|^2 samples
  /// (which the rotation leaves unchanged); returning false ends the run
  /// early. Returns the number of steps taken.
  template <class OnStep>
  std::size_t advance(GpState& s, std::size_t steps, OnStep&& on_step);

  std::size_t advance(GpState& s, std::size_t steps) {
    return advance(s, steps, [](double, std::span<const double>) { return true; });
  }

 private:
  void rotate(std::span<Complex> psi, double duration) const noexcept;
  void kinetic(std::span<Complex> psi) noexcept;
  void refresh_density(std::span<const Complex> psi);

  double lambda_;
  double dt_;
  bool nonlinear_;
  SpectralTransform fft_;
  std::vector<Complex> propagator_;
  std::vector<double> density_;
};

/// One Strang step from `state` under `cfg` (builds a fresh stepper).
GpState step_gp(const GpState& state, const GpConfig& cfg);

GpTrajectory run_gp(const GpConfig& cfg);

/// Earliest time min rho < threshold rho0, linearly interpolated between the
/// bracketing samples.
std::optional<double> detect_singularity_time(std::span<const SeriesPoint> min_density,
                                              double threshold = 0.5);
std::optional<double> detect_singularity_time(const GpTrajectory& traj, double threshold = 0.5);

/// Rightmost x where rho rises through `level` going right.
std::optional<double> rightmost_crossing(const Grid1D& grid, std::span<const double> rho,
                                         double level = 0.5);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  std::size_t n = 0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Least-squares speed of the rightmost half-density front over snapshots
/// later than tau_sing + `delay`.
LineFit measure_front_speed(const GpTrajectory& traj, double delay = 10.0);

struct SweepPoint {
  double lambda = 0.0;
  double h = 0.0;
  double w = 0.0;
  std::optional<double> tau_sing;
  std::string error;
  std::vector<std::string> warnings;

  /// Collapse coordinates z = lambda w h / xi and y = tau_sing xi / (tau w).
  double z() const noexcept { return lambda * w * h; }
  std::optional<double> y() const {
    return tau_sing ? std::optional<double>(*tau_sing / w) : std::nullopt;
  }
};

/// Runs every (lambda, h, w) combination and records tau_sing. Runs are
/// independent and executed on `threads` workers (0 = hardware
/// concurrency); results are sorted by (lambda, h, w).
std::vector<SweepPoint> scaling_sweep(std::span<const double> lambdas,
                                      std::span<const double> heights,
                                      std::span<const double> widths, const GpConfig& base,
                                      unsigned threads = 0);

struct CollapseFit {
  LineFit fit;
  bool degenerate = true;
};

/// Log-log fit of y against z over successful points with z <= z_max.
CollapseFit fit_collapse(std::span<const SweepPoint> points, double z_max = 1.0);

/// Largest (max - min) / min of y among points sharing the same z.
double collapse_spread(std::span<const SweepPoint> points);

// ---------------------------------------------------------------------------

template <class OnStep>
std::size_t GpStepper::advance(GpState& s, std::size_t steps, OnStep&& on_step) {
  if (steps == 0) return 0;
  std::span<Complex> psi(s.psi.values);
  rotate(psi, 0.5 * dt_);
  std::size_t taken = 0;
  for (std::size_t k = 0; k < steps; ++k) {
    kinetic(psi);
    ++taken;
    s.t += dt_;
    refresh_density(psi);
    const bool go_on = on_step(s.t, std::span<const double>(density_));
    const bool last = (k + 1 == steps) || !go_on;
    rotate(psi, last ? 0.5 * dt_ : dt_);
    if (!go_on) break;
  }
  return taken;
}

}  // namespace qdiff
