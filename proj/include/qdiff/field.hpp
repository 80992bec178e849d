#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace qdiff {

using Complex = std::complex<double>;

/// Natural units of the condensate: healing length, coherence time and
/// background density are all one, with m = U = 1.
struct NaturalUnits {
  static constexpr double xi = 1.0;
  static constexpr double tau = 1.0;
  static constexpr double rho0 = 1.0;
  /// Speed of sound, sqrt(2) xi / tau.
  static constexpr double c = std::numbers::sqrt2 * xi / tau;
};

inline constexpr double kSoundSpeed = NaturalUnits::c;

/// Uniform periodic grid. Points sit at x_j = -L/2 + j dx, j = 0..n-1, so the
/// perturbation is centred at x = 0 and x = -L/2 is identified with x = +L/2.
class Grid1D {
 public:
  Grid1D(std::size_t n_points, double dx);

  std::size_t size() const noexcept { return n_; }
  double dx() const noexcept { return dx_; }
  double length() const noexcept { return static_cast<double>(n_) * dx_; }
  double x(std::size_t j) const noexcept {
    // (j - n/2) dx: same points as -L/2 + j dx, but exactly odd under mirror()
    return (static_cast<double>(j) - static_cast<double>(n_ / 2)) * dx_;
  }
  std::vector<double> coordinates() const;

  /// Angular wavenumber of FFT bin j (FFTW ordering).
  double wavenumber(std::size_t j) const noexcept;

  /// Index of the mirror point x -> -x.
  std::size_t mirror(std::size_t j) const noexcept { return (n_ - j) % n_; }

  bool operator==(const Grid1D&) const = default;

 private:
  std::size_t n_;
  double dx_;
};

/// Builds a grid with n = round(length / dx) points. The point count must be
/// even, at least 8, and length / dx must be an integer to 1e-9 relative.
Grid1D make_grid(double length, double dx);

template <class T>
struct Field {
  Grid1D grid;
  std::vector<T> values;

  explicit Field(const Grid1D& g) : grid(g), values(g.size(), T{}) {}
  Field(const Grid1D& g, std::vector<T> v);

  std::size_t size() const noexcept { return values.size(); }
  T& operator[](std::size_t j) { return values[j]; }
  const T& operator[](std::size_t j) const { return values[j]; }
  bool all_finite() const noexcept;
};

using RealField = Field<double>;
using ComplexField = Field<Complex>;

/// Condensate field psi(x) and the simulation clock.
struct GpState {
  ComplexField psi;
  double t = 0.0;

  RealField density() const;
  RealField phase() const;
};

/// psi(x, 0) = sqrt(1 + h exp(-x^2 / w^2)), zero phase.
GpState gaussian_bump_state(const Grid1D& grid, double h, double w);

/// Second-order central difference with periodic wrap; order is 1 or 2.
RealField derivative(const RealField& f, int order);
ComplexField derivative(const ComplexField& f, int order);

/// N = sum |psi|^2 dx.
double total_number(const GpState& state);
double total_number(std::span<const Complex> psi, double dx);

double min_value(std::span<const double> v);
double max_abs(std::span<const double> v);

/// Linear interpolation of a periodic field at an arbitrary coordinate.
double interpolate_periodic(const RealField& f, double x);

}  // namespace qdiff
