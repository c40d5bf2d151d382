#pragma once

#include "conicband/dispersion.hpp"

namespace conicband {

/// 2x2 real propagator acting on the state (psi, d psi / d x~), x~ = x / a.
/// Entries of a strong-kick period matrix reach ~1e4 while its determinant stays 1;
/// extended precision keeps that cancellation below 1e-12.
struct TransferMatrix {
  using Scalar = long double;

  Scalar m11 = 1.0L;
  Scalar m12 = 0.0L;
  Scalar m21 = 0.0L;
  Scalar m22 = 1.0L;

  Scalar determinant() const { return m11 * m22 - m12 * m21; }
  Scalar trace() const { return m11 + m22; }

  friend TransferMatrix operator*(const TransferMatrix& a, const TransferMatrix& b) {
    return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
            a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
  }
  friend bool operator==(const TransferMatrix&, const TransferMatrix&) = default;
};

/// Free propagation over one spacing: [[cos r, sin r / r], [-r sin r, cos r]].
TransferMatrix free_propagator(double rho);

/// Derivative jump across a delta of strength s: [[1, 0], [2 s, 1]].
TransferMatrix delta_kick(double strength);

/// kick(v) * free * kick(u) * free, one doubled cell.
TransferMatrix period_matrix(const Lattice& lat, double rho);

/// Half trace of the period matrix; the Bloch condition is cos(2 kappa) = this.
double dispersion_from_trace(const Lattice& lat, double rho);

}  // namespace conicband
