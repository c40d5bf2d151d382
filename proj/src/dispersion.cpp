#include "conicband/dispersion.hpp"

#include <cmath>
#include <string>

#include "conicband/errors.hpp"

namespace conicband {
namespace {

// Derivatives of sinc lose digits to cancellation sooner than sinc itself.
constexpr double kSincDerivSeriesThreshold = 1e-2;

void require_rho(double rho, const char* op) {
  if (!(rho >= 0.0) || !std::isfinite(rho)) {
    throw DomainError(std::string(op) + ": rho must be finite and >= 0");
  }
}

void require_positive_rho(double rho, const char* op) {
  if (!(rho >= kRhoEpsilon) || !std::isfinite(rho)) {
    throw DomainError(std::string(op) + ": rho must be >= 1e-12");
  }
}

void require_strength(double s, const char* op) {
  if (!(s >= 0.0) || !std::isfinite(s)) {
    throw DomainError(std::string(op) + ": strength must be finite and >= 0");
  }
}

}  // namespace

Lattice::Lattice(double u, double v) : u_(u), v_(v) {
  require_strength(u, "Lattice");
  require_strength(v, "Lattice");
}

double sinc(double x) {
  const double ax = std::abs(x);
  if (ax < kSincSeriesThreshold) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0));
  }
  return std::sin(x) / x;
}

double sinc_prime(double x) {
  if (std::abs(x) < kSincDerivSeriesThreshold) {
    const double x2 = x * x;
    return x * (-1.0 / 3.0 + x2 * (1.0 / 30.0 + x2 * (-1.0 / 840.0 + x2 / 45360.0)));
  }
  return (x * std::cos(x) - std::sin(x)) / (x * x);
}

double sinc_second(double x) {
  if (std::abs(x) < kSincDerivSeriesThreshold) {
    const double x2 = x * x;
    return -1.0 / 3.0 + x2 * (1.0 / 10.0 + x2 * (-1.0 / 168.0 + x2 / 6480.0));
  }
  const double s = std::sin(x);
  const double c = std::cos(x);
  return (-x * x * s - 2.0 * x * c + 2.0 * s) / (x * x * x);
}

double f1(double kappa) { return std::cos(kappa); }

double f2(double kappa) { return std::cos(2.0 * kappa); }

double g1(double rho, double strength) {
  require_rho(rho, "g1");
  require_strength(strength, "g1");
  return std::cos(rho) + strength * sinc(rho);
}

double g1_prime(double rho, double strength) {
  require_positive_rho(rho, "g1_prime");
  require_strength(strength, "g1_prime");
  return -std::sin(rho) + strength * sinc_prime(rho);
}

double g1_second(double rho, double strength) {
  require_positive_rho(rho, "g1_second");
  require_strength(strength, "g1_second");
  return -std::cos(rho) + strength * sinc_second(rho);
}

// sin(2 rho)/rho = 2 sinc(2 rho); the chain rule supplies the extra factors of 2.
double g2(double rho, const Lattice& lat) {
  require_rho(rho, "g2");
  const double s = sinc(rho);
  return std::cos(2.0 * rho) + 2.0 * (lat.u() + lat.v()) * sinc(2.0 * rho) +
         2.0 * lat.u() * lat.v() * s * s;
}

double g2_prime(double rho, const Lattice& lat) {
  require_positive_rho(rho, "g2_prime");
  return -2.0 * std::sin(2.0 * rho) + 4.0 * (lat.u() + lat.v()) * sinc_prime(2.0 * rho) +
         4.0 * lat.u() * lat.v() * sinc(rho) * sinc_prime(rho);
}

double g2_second(double rho, const Lattice& lat) {
  require_positive_rho(rho, "g2_second");
  const double s = sinc(rho);
  const double ds = sinc_prime(rho);
  return -4.0 * std::cos(2.0 * rho) + 8.0 * (lat.u() + lat.v()) * sinc_second(2.0 * rho) +
         4.0 * lat.u() * lat.v() * (ds * ds + s * sinc_second(rho));
}

double plus_edge_kernel(double rho, const Lattice& lat) {
  require_positive_rho(rho, "plus_edge_kernel");
  const double s = std::sin(rho);
  return -s + (lat.u() + lat.v()) * std::cos(rho) / rho + lat.u() * lat.v() * s / (rho * rho);
}

}  // namespace conicband
