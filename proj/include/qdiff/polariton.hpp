#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace qdiff {

using Complex = std::complex<double>;

/// Microscopic parameters of dark-state Rydberg polaritons.
struct PolaritonParams {
  double g = 1000.0;
  double c_light = 1.0;
  double delta = -10.0;
  double gamma = 1.0;
  double Omega = 60.29925372672534;  // 6 |Delta|
  double C6 = 1.0;

  Complex Delta() const noexcept { return {delta, gamma}; }

  /// Throws DomainError unless g, gamma, Omega, c_light > 0 and C6 != 0.
  void validate() const;
  /// Non-fatal notes, e.g. when g is not well above |Delta|, Omega, gamma.
  std::vector<std::string> warnings() const;

  /// The scattering scan point: delta / gamma = -10, Omega = 6 |Delta|, C6 > 0.
  static PolaritonParams scan_default();
};

/// m = -g^4 / (2 Delta c^2 Omega^2).
Complex effective_mass(const PolaritonParams& p);

/// gamma / |delta|, defined for delta < 0.
double one_body_lambda(double delta, double gamma);

/// g^2 / (c |Delta|).
double kappa(const PolaritonParams& p);

struct ChiBlockade {
  Complex chi;
  double r_b = 0.0;
  /// chi vanishes (Omega = Delta), so there is no blockade scale.
  bool degenerate = false;
};

/// chi = 1/(2 Delta) - Delta/(2 Omega^2), r_b = |C6 chi|^(1/6).
ChiBlockade chi_and_blockade(const PolaritonParams& p);

/// U(r) = (1/chi) / (sigma (r/r_b)^6 - 1), sigma = |chi C6| / (chi C6).
Complex effective_potential(double r, const PolaritonParams& p);

/// Integral of m U(r) over (0, inf) by adaptive quadrature.
Complex potential_integral(const PolaritonParams& p);

/// Closed-form well strength u0^2 r_b, equal to minus the integral of m U.
Complex square_well_strength(const PolaritonParams& p);

/// a = r_b + cot(u0 r_b) / u0. At a pole of tan the cotangent vanishes and
/// a = r_b. Throws DomainError for u0 = 0 or u0 r_b at a zero of sin.
Complex scattering_length_square_well(Complex u0, double r_b);

struct ScatteringOptions {
  /// Start and end of the integration in units of r_b.
  double r_min = 1e-3;
  double r_max = 20.0;
  double tolerance = 1e-10;
  /// Linear fit window as fractions of r_max.
  double fit_from = 0.8;
  double max_fit_residual = 1e-4;
};

struct NumericScattering {
  Complex a;
  bool free_particle = false;
  double fit_residual = 0.0;
};

/// Zero-energy solution of psi'' = q(r) psi. The even solution is started at
/// r_min from its Taylor expansion about r = 0 and the tail is fitted to
/// A r + B, giving a = -B / A. Throws NumericFault when the tail is not yet
/// linear to max_fit_residual. The fit basis includes the leading correction
/// from a potential tail falling off as r^-6.
NumericScattering zero_energy_scattering(const std::function<Complex(double)>& q,
                                         const ScatteringOptions& opt = {});

/// Numeric scattering length of m U, integrated in units of r_b.
NumericScattering scattering_length_numeric(const PolaritonParams& p,
                                            const ScatteringOptions& opt = {});

/// Square-well scattering length with u0 from square_well_strength.
Complex scattering_length_square_well(const PolaritonParams& p);

/// Copy of p with C6 rescaled (sign kept) so that kappa r_b = kappa_rb.
PolaritonParams with_kappa_rb(const PolaritonParams& p, double kappa_rb);

struct ScanRow {
  double kappa_rb = 0.0;
  /// 1 / (m a) for the numeric and square-well scattering lengths.
  Complex inv_ma_num;
  Complex inv_ma_sq;
};

std::vector<ScanRow> polariton_scan(const PolaritonParams& p, const std::vector<double>& kappa_rb,
                                    const ScatteringOptions& opt = {});

/// Bisection for a sign change of Im f on [lo, hi], stopping once
/// |Im f| < rel_tol |Re f| or the bracket collapses. Throws DomainError when
/// the end points do not bracket a sign change.
double find_im_zero_crossing(const std::function<Complex(double)>& f, double lo, double hi,
                             double rel_tol = 1e-4);

/// Lossless point: kappa r_b in [lo, hi] where Im(1 / (m a_num)) changes sign.
double find_lossless_point(const PolaritonParams& p, double lo, double hi,
                           const ScatteringOptions& opt = {});

}  // namespace qdiff
