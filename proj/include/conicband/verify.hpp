#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "conicband/dispersion.hpp"
#include "conicband/rootfind.hpp"

namespace conicband {

struct CheckResult {
  std::string name;
  double max_residual;
  double tolerance;
  bool pass;
};

/// Identities, transfer-matrix oracle, derivative consistency, band residuals, and (when
/// they apply) gap-closure, saddle and tight-binding checks for one lattice.
/// Deterministic for a fixed seed.
std::vector<CheckResult> run_verification(const Lattice& lat, int samples, std::uint64_t seed,
                                          const SolverConfig& cfg);

/// Richardson-extrapolated central difference, h and h/2.
double richardson_derivative(const ScalarFunction& f, double x, double h = 1e-3);

/// Five-point second-difference stencil.
double five_point_second(const ScalarFunction& f, double x, double h = 1e-3);

}  // namespace conicband
