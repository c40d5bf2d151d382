#pragma once

#include <functional>
#include <vector>

namespace conicband {

struct SolverConfig {
  double abs_tol = 1e-12;
  int max_iter = 200;
  double scan_step = 1e-3;  // in rho units
  double rho_max = 60.0;

  /// Throws DomainError when a field is out of range.
  void validate() const;
};

/// An interval known to contain a root: f_lo * f_hi <= 0.
struct Bracket {
  double lo;
  double hi;
  double f_lo;
  double f_hi;
};

using ScalarFunction = std::function<double(double)>;

/// Every sign-change interval of f on [lo, hi] at sampling spacing <= cfg.scan_step,
/// ascending and disjoint. Tangential (even-multiplicity) roots are invisible here.
std::vector<Bracket> scan_brackets(const ScalarFunction& f, double lo, double hi,
                                   const SolverConfig& cfg);

/// Bisection down to an interval of width <= cfg.abs_tol; returns its midpoint.
/// Bit-for-bit reproducible. Throws ConvergenceError past cfg.max_iter.
double refine(const ScalarFunction& f, const Bracket& b, const SolverConfig& cfg);

/// scan_brackets followed by refine on each bracket.
std::vector<double> find_roots(const ScalarFunction& f, double lo, double hi,
                               const SolverConfig& cfg);

}  // namespace conicband
