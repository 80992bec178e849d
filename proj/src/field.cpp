#include "qdiff/field.hpp"

#include <algorithm>
#include <string>

#include "qdiff/errors.hpp"

namespace qdiff {

Grid1D::Grid1D(std::size_t n_points, double dx) : n_(n_points), dx_(dx) {
  if (!(dx > 0.0) || !std::isfinite(dx)) {
    throw DomainError("grid spacing must be positive and finite");
  }
  if (n_points < 8 || n_points % 2 != 0) {
    throw DomainError("grid needs an even number of points >= 8, got " +
                      std::to_string(n_points));
  }
}

std::vector<double> Grid1D::coordinates() const {
  std::vector<double> xs(n_);
  for (std::size_t j = 0; j < n_; ++j) xs[j] = x(j);
  return xs;
}

double Grid1D::wavenumber(std::size_t j) const noexcept {
  const auto n = static_cast<long long>(n_);
  long long m = static_cast<long long>(j);
  if (m >= n / 2) m -= n;  // Nyquist bin is treated as negative
  return 2.0 * std::numbers::pi * static_cast<double>(m) / length();
}

Grid1D make_grid(double length, double dx) {
  if (!(length > 0.0) || !(dx > 0.0) || !std::isfinite(length) || !std::isfinite(dx)) {
    throw DomainError("grid length and spacing must be positive");
  }
  const double ratio = length / dx;
  const double n = std::round(ratio);
  if (std::abs(ratio - n) > 1e-9 * std::max(1.0, ratio)) {
    throw DomainError("length / dx is not an integer point count");
  }
  return Grid1D(static_cast<std::size_t>(n), dx);
}

template <class T>
Field<T>::Field(const Grid1D& g, std::vector<T> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.size()) {
    throw DomainError("field size does not match grid");
  }
}

template <class T>
bool Field<T>::all_finite() const noexcept {
  return std::all_of(values.begin(), values.end(), [](const T& v) {
    if constexpr (std::is_same_v<T, Complex>) {
      return std::isfinite(v.real()) && std::isfinite(v.imag());
    } else {
      return std::isfinite(v);
    }
  });
}

template struct Field<double>;
template struct Field<Complex>;

RealField GpState::density() const {
  RealField rho(psi.grid);
  for (std::size_t j = 0; j < psi.size(); ++j) rho[j] = std::norm(psi[j]);
  return rho;
}

RealField GpState::phase() const {
  RealField theta(psi.grid);
  for (std::size_t j = 0; j < psi.size(); ++j) theta[j] = std::arg(psi[j]);
  return theta;
}

GpState gaussian_bump_state(const Grid1D& grid, double h, double w) {
  if (!(w > 0.0)) throw DomainError("bump width must be positive");
  if (!(h > -1.0)) throw DomainError("bump height must exceed -1 (density would go negative)");
  GpState s{ComplexField(grid), 0.0};
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.x(j);
    s.psi[j] = std::sqrt(NaturalUnits::rho0) * std::sqrt(1.0 + h * std::exp(-x * x / (w * w)));
  }
  return s;
}

namespace {

template <class T>
Field<T> central_difference(const Field<T>& f, int order) {
  const std::size_t n = f.size();
  const double dx = f.grid.dx();
  Field<T> out(f.grid);
  if (order == 1) {
    const double s = 0.5 / dx;
    for (std::size_t j = 0; j < n; ++j) {
      out[j] = s * (f[(j + 1) % n] - f[(j + n - 1) % n]);
    }
  } else if (order == 2) {
    const double s = 1.0 / (dx * dx);
    for (std::size_t j = 0; j < n; ++j) {
      out[j] = s * (f[(j + 1) % n] - 2.0 * f[j] + f[(j + n - 1) % n]);
    }
  } else {
    throw DomainError("derivative order must be 1 or 2, got " + std::to_string(order));
  }
  return out;
}

}  // namespace

RealField derivative(const RealField& f, int order) { return central_difference(f, order); }
ComplexField derivative(const ComplexField& f, int order) { return central_difference(f, order); }

double total_number(std::span<const Complex> psi, double dx) {
  double sum = 0.0;
  for (const auto& v : psi) sum += std::norm(v);
  return sum * dx;
}

double total_number(const GpState& state) {
  return total_number(state.psi.values, state.psi.grid.dx());
}

double min_value(std::span<const double> v) {
  return v.empty() ? 0.0 : *std::min_element(v.begin(), v.end());
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double interpolate_periodic(const RealField& f, double x) {
  const auto& g = f.grid;
  const double s = (x + 0.5 * g.length()) / g.dx();
  const double fl = std::floor(s);
  const double frac = s - fl;
  const auto n = static_cast<long long>(g.size());
  long long j = static_cast<long long>(fl) % n;
  if (j < 0) j += n;
  const auto j1 = (j + 1) % n;
  return (1.0 - frac) * f[static_cast<std::size_t>(j)] + frac * f[static_cast<std::size_t>(j1)];
}

}  // namespace qdiff
