#include "conicband/transfer.hpp"

#include <cmath>

#include "conicband/errors.hpp"

namespace conicband {

TransferMatrix free_propagator(double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw DomainError("free_propagator: rho must be finite and > 0");
  }
  const long double r = rho;
  const long double c = std::cos(r);
  const long double s = std::sin(r);
  return {c, s / r, -r * s, c};
}

TransferMatrix delta_kick(double strength) {
  if (!(strength >= 0.0) || !std::isfinite(strength)) {
    throw DomainError("delta_kick: strength must be finite and >= 0");
  }
  return {1.0L, 0.0L, 2.0L * strength, 1.0L};
}

TransferMatrix period_matrix(const Lattice& lat, double rho) {
  const TransferMatrix hop = free_propagator(rho);
  return delta_kick(lat.v()) * hop * delta_kick(lat.u()) * hop;
}

double dispersion_from_trace(const Lattice& lat, double rho) {
  return static_cast<double>(0.5L * period_matrix(lat, rho).trace());
}

}  // namespace conicband
