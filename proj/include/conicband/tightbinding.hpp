#pragma once

#include <vector>

#include "conicband/dirac.hpp"
#include "conicband/dispersion.hpp"
#include "conicband/rootfind.hpp"

namespace conicband {

/// Strengths below this are outside the tight-binding regime. The closed forms still
/// evaluate; callers get a warning flag instead of an error.
inline constexpr double kTightBindingFloor = 10.0;

inline bool in_tight_binding_regime(double strength) { return strength >= kTightBindingFloor; }

/// Offset of the n-th zero of g1 from n pi: (-1)^(n+1) n pi / u.
double delta_n(int n, double strength);

/// Predicted zero n pi + (-1)^n delta_n = n pi (1 - 1/u).
double rho_n_tb(int n, double strength);

/// n^2 pi^2 (1 - 1/u)^2.
double energy_n(int n, double strength);

/// n^2 pi^2 (1 - 2/u), first order in 1/u. Differs from energy_n by n^2 pi^2 / u^2.
double energy_n_first_order(int n, double strength);

struct TBLevel {
  int n;
  Family family;
  double rho_exact;
  double rho_tb;
  double rel_err;
  double energy_exact;
  double energy_tb;
  double delta_n;
  bool within_bound;  // rel_err <= 5 (n pi / u)^2
};

struct TBComparison {
  std::vector<TBLevel> levels;  // u-family rows for n = 1..n_max, then v-family
  double c_fit_u = 0.0;         // max over n of rel_err * u^2
  double c_fit_v = 0.0;
  /// delta_n(u) - delta_n(v) and its ratio to delta_n(u)^2, per n.
  std::vector<double> delta_difference;
  std::vector<double> delta_difference_ratio;
  bool regime_warning = false;
};

/// Exact zeros of g1 (root finder) against the closed forms for n = 1..n_max.
/// Requires n_max * pi <= cfg.rho_max.
TBComparison tb_compare(const Lattice& lat, int n_max, const SolverConfig& cfg);

}  // namespace conicband
