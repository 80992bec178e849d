#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qdiff/field.hpp"

namespace qdiff {

/// Travelling front of the long-wavelength hydrodynamic equations
///   rho_t + (rho v)_x = -lambda rho v^2,   v_t + v v_x = -2 rho_x
/// sampled at z = x - u t.
struct SolitonProfile {
  double u = 0.0;
  double lambda = 0.0;
  double z0 = 0.0;
  std::vector<double> z;
  std::vector<double> v;
  std::vector<double> rho;
};

/// f(y) = log(-y) - ((2 sqrt3 + 3)/6) log(sqrt3 - 1 + y) + ((2 sqrt3 - 3)/6) log(sqrt3 + 1 - y),
/// defined for y in (1 - sqrt3, 0) where it decreases from +inf to -inf.
double soliton_f(double y);

/// Inverse of soliton_f by bisection to full double resolution.
double soliton_f_inverse(double target);

/// Sonic (u = c) profile: v / c = f^{-1}(sqrt2 lambda (z0 - z) / 3).
SolitonProfile sonic_profile(std::span<const double> z, double z0, double lambda);

enum class SpeedClass { Invalid, ValidVNegative, ValidVPositive };

const char* to_string(SpeedClass s) noexcept;

/// Finds the zeros of dz/dv and reports which side of v = 0 (if any) carries
/// a monotone z(v) covering the whole line.
SpeedClass classify_speed(double u);

/// z(v) - z0 for the travelling front of speed u.
double soliton_z_of_v(double v, double u, double lambda);

/// General-speed profile from the explicit z(v), inverted per sample. Throws
/// DomainError for speeds classify_speed rejects.
SolitonProfile general_profile(double u, std::span<const double> z, double z0, double lambda);

struct HydroResidual {
  double continuity = 0.0;
  double euler = 0.0;
};

/// Max-norm residuals of both hydrodynamic equations under d/dt -> -u d/dz,
/// with sixth-order central differences at interior samples. Needs uniform
/// spacing no coarser than 0.05 / lambda.
HydroResidual hydro_residual(const SolitonProfile& profile);

struct FrontFit {
  double z0 = 0.0;
  double mismatch = 0.0;
  std::size_t window_points = 0;
};

/// Places the sonic profile so its half-density point sits on the rightmost
/// rho = 1/2 crossing of the snapshot, and measures the L-inf mismatch where
/// the profile density lies in [0.05, 0.95].
FrontFit fit_front(const Grid1D& grid, std::span<const double> rho, double lambda);

/// Distance between the sonic profile's rho = 0.1 and rho = 0.9 points.
double sonic_core_width(double lambda);

}  // namespace qdiff
