#pragma once

// Dispersion kernels of the two-strength delta lattice.
//
// Units: lattice spacing a = 1 and hbar^2/(2m) = 1, so
//   kappa = k a          (Bloch momentum)
//   rho   = q a          (free wavenumber inside a cell), rho >= 0
//   eps   = rho^2        (energy in units hbar^2 / (2 m a^2))
//   u     = m U a / hbar^2,  v = m V a / hbar^2   (delta strengths)
// Nothing here stores physical constants; converting back is the caller's job.

namespace conicband {

/// Inputs with rho below this are rejected by operations that need rho > 0.
inline constexpr double kRhoEpsilon = 1e-12;

/// Below this, sin(x)/x is evaluated from its Taylor series.
inline constexpr double kSincSeriesThreshold = 1e-4;

/// Two alternating delta strengths; u sits at even sites, v at odd sites.
class Lattice {
 public:
  /// Throws DomainError unless both strengths are finite and >= 0.
  Lattice(double u, double v);

  double u() const noexcept { return u_; }
  double v() const noexcept { return v_; }
  bool symmetric() const noexcept { return u_ == v_; }

  friend bool operator==(const Lattice&, const Lattice&) = default;

 private:
  double u_;
  double v_;
};

/// sin(x)/x with sinc(0) = 1, and its first two derivatives.
double sinc(double x);
double sinc_prime(double x);
double sinc_second(double x);

double f1(double kappa);
double f2(double kappa);

/// cos(rho) + u sin(rho)/rho, the single-strength kernel.
double g1(double rho, double strength);
double g1_prime(double rho, double strength);
double g1_second(double rho, double strength);

/// cos 2rho + (u+v) sin 2rho / rho + 2uv sinc(rho)^2, evaluated term by term.
double g2(double rho, const Lattice& lat);
double g2_prime(double rho, const Lattice& lat);
double g2_second(double rho, const Lattice& lat);

/// (g2 - 1) / (2 sin rho) = -sin rho + (u+v) cos rho / rho + uv sin rho / rho^2.
/// Its zeros are the g2 = +1 band edges that do not sit at multiples of pi.
double plus_edge_kernel(double rho, const Lattice& lat);

/// F = f2 - g2, whose zero set is the band structure.
inline double eigen_function(double kappa, double rho, const Lattice& lat) {
  return f2(kappa) - g2(rho, lat);
}

}  // namespace conicband
