#pragma once

#include <numbers>
#include <utility>
#include <vector>

#include "conicband/dispersion.hpp"
#include "conicband/rootfind.hpp"

namespace conicband {

inline constexpr double kHalfPi = std::numbers::pi / 2.0;

/// Which side of the allowed range an edge sits on: g2 = +1 (kappa = 0) or g2 = -1
/// (kappa = +-pi/2).
enum class EdgeKind { kPlusOne, kMinusOne };

struct BandEdge {
  double rho;
  EdgeKind kind;
  /// g2 only touches the level here, so two edges coincide and the gap between them is
  /// closed. Happens for g2 = -1 when u == v and for g2 = +1 when u == v == 0.
  bool tangent = false;
};

struct BandPoint {
  double kappa;
  double rho;
  double energy;
};

struct Band {
  int index;  // 1-based, ascending energy
  std::vector<BandPoint> points;
  std::pair<double, double> edges;  // rho at band bottom, rho at band top
};

/// All solutions of g2 = +1 and g2 = -1 in (kRhoEpsilon, rho_max], ascending. Tangent
/// edges appear once. Built from the factorizations
///   g2 + 1 = 2 g1(u) g1(v)        g2 - 1 = 2 sin(rho) plus_edge_kernel(rho)
/// so every root found is a simple root of one factor.
std::vector<BandEdge> band_edges(const Lattice& lat, const SolverConfig& cfg, double rho_max);

/// Closed rho-intervals of the allowed bands, derived from an edge list of `lat`.
/// Tangent edges close two bands; a free lattice gets its first band from rho = 0.
std::vector<std::pair<double, double>> band_intervals(const Lattice& lat,
                                                      const std::vector<BandEdge>& edges);

/// n-th ascending solution of g2(rho) = cos(2 kappa), kappa in [-pi/2, pi/2].
/// Throws BandNotFoundError when fewer than n bands fit below cfg.rho_max.
BandPoint band_at_kappa(const Lattice& lat, double kappa, int n, const SolverConfig& cfg);

/// Same, reusing intervals from band_intervals().
BandPoint band_at_kappa(const Lattice& lat, double kappa, int n, const SolverConfig& cfg,
                        const std::vector<std::pair<double, double>>& intervals);

/// Uniform kappa grid of n_kappa points with exact endpoints +-pi/2, antisymmetric.
std::vector<double> kappa_grid(int n_kappa);

/// n_bands bands over kappa_grid(n_kappa). `threads` == 0 picks the hardware default;
/// the result does not depend on it.
std::vector<Band> band_structure(const Lattice& lat, int n_bands, int n_kappa,
                                 const SolverConfig& cfg, unsigned threads = 1);

}  // namespace conicband
