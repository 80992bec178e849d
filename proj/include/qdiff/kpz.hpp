#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qdiff/field.hpp"
#include "qdiff/gp.hpp"

namespace qdiff {

/// Phase field of the dispersive KPZ equation
///   theta_tt = 2 theta_xx + 2 lambda theta_x^2
/// written as a first-order system in (theta, theta_dot).
struct KpzState {
  RealField theta;
  RealField theta_dot;
  double t = 0.0;

  /// rho = rho0 - (rho0 tau / 2) theta_dot.
  RealField density() const;
};

/// theta = 0, theta_dot = -2 delta_rho. Throws if |delta_rho| >= 1 anywhere.
KpzState kpz_init_from_density(const RealField& delta_rho);

/// Largest stable RK4 step, 0.5 dx / c.
double kpz_max_dt(const Grid1D& grid) noexcept;

/// One classical RK4 step with second-order central differences.
KpzState step_kpz(const KpzState& state, double dt, double lambda);

enum class KpzScheme {
  /// RK4 in time, central differences in space.
  Rk4Central,
  /// Riemann variables R = theta_dot +- c theta_x shifted one cell per step
  /// (dt = dx / c) with the source applied in Strang halves. Signals travel
  /// exactly one cell per step, so the discrete light cone is the physical one.
  Characteristic,
};

struct KpzConfig {
  double lambda = 0.4;
  /// Upper bound on the step; 0 picks the scheme's largest stable step. The
  /// RK4 step is reduced so that snapshot times fall on the step lattice.
  double dt = 0.0;
  double t_max = 100.0;
  double snapshot_every = 1.0;
  KpzScheme scheme = KpzScheme::Rk4Central;
  double blowup_threshold = 1e6;
  bool keep_fields = true;
};

struct KpzSnapshot {
  double t;
  std::vector<double> theta;
  std::vector<double> theta_dot;

  std::vector<double> density() const;
};

struct KpzTrajectory {
  Grid1D grid;
  double lambda = 0.0;
  double dt = 0.0;
  std::vector<KpzSnapshot> snapshots;
  /// (t, max |theta_dot|) after every step.
  std::vector<SeriesPoint> rate_series;
  /// First step time at which |theta_dot| exceeded the threshold or went NaN.
  std::optional<double> blowup_time;
  KpzState final_state;
};

/// Integrates until blow-up or t_max.
KpzTrajectory run_kpz(const KpzState& initial, const KpzConfig& cfg);

// ---------------------------------------------------------------------------
// Toy first-order wave equation theta_t = theta_x + lambda theta^2.

/// theta(x, t) = theta0(x + t) / (1 - lambda theta0(x + t) t), periodic shift
/// with linear interpolation.
RealField toy_wave_exact(const RealField& theta0, double t, double lambda);

/// Upwind transport plus a pointwise RK4 reaction step. Requires dt <= dx;
/// the step is shortened so that t is reached exactly.
RealField toy_wave_numeric(const RealField& theta0, double lambda, double dt, double t);

/// Time at which max |theta| first exceeds `threshold` (or goes non-finite)
/// under the scheme of toy_wave_numeric with fixed step dt.
std::optional<double> toy_wave_blowup_time(const RealField& theta0, double lambda, double dt,
                                           double t_max, double threshold = 1e6);

// ---------------------------------------------------------------------------
// Parabolic family theta = a(t) x^2 + b(t):  a'' = 8 lambda a^2,  b'' = 4 a.

struct ParabolaCoeffs {
  double a = 0.0;
  double b = 0.0;
  double a_dot = 0.0;
  double b_dot = 0.0;
};

/// First integral E = a_dot^2 / 2 - (8 lambda / 3) a^3.
double parabola_energy(const ParabolaCoeffs& c, double lambda) noexcept;

/// Adaptive Dormand-Prince integration to time t (tolerance 1e-10). Throws
/// DomainError if a diverges first.
ParabolaCoeffs parabola_evolve(const ParabolaCoeffs& c, double t, double lambda);

/// Time at which a first exceeds `escape` in the ODE integration.
double parabola_escape_time(const ParabolaCoeffs& c, double lambda, double escape = 1e6);

/// Divergence time of a from the energy quadrature. Throws DomainError when a
/// never diverges (lambda <= 0, the rest state, or the zero-energy descent).
double parabola_blowup_time(const ParabolaCoeffs& c, double lambda);

// ---------------------------------------------------------------------------

/// For two initial states run under the same configuration, the largest
/// |x| - r0 at which theta or theta_dot differ by more than `tol`, at every
/// snapshot. Absent entries mean the states agree everywhere.
struct CausalitySample {
  double t;
  std::optional<double> radius;
};

std::vector<CausalitySample> causality_radius_series(const KpzState& a, const KpzState& b,
                                                     const KpzConfig& cfg, double r0,
                                                     double tol = 1e-9);

/// Radius for the final states (the last step at or before cfg.t_max).
std::optional<double> causality_radius_check(const KpzState& a, const KpzState& b,
                                             const KpzConfig& cfg, double r0,
                                             double tol = 1e-9);

}  // namespace qdiff
