#include "conicband/tightbinding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "conicband/errors.hpp"

namespace conicband {
namespace {

void require_level(int n, double strength, const char* op) {
  if (n < 1) throw DomainError(std::string(op) + ": n must be >= 1");
  if (!(strength > 0.0)) throw DomainError(std::string(op) + ": strength must be > 0");
}

}  // namespace

double delta_n(int n, double strength) {
  require_level(n, strength, "delta_n");
  const double sign = (n % 2 == 1) ? 1.0 : -1.0;
  return sign * n * std::numbers::pi / strength;
}

double rho_n_tb(int n, double strength) {
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  return n * std::numbers::pi + sign * delta_n(n, strength);
}

double energy_n(int n, double strength) {
  require_level(n, strength, "energy_n");
  const double f = 1.0 - 1.0 / strength;
  return n * n * std::numbers::pi * std::numbers::pi * f * f;
}

double energy_n_first_order(int n, double strength) {
  require_level(n, strength, "energy_n_first_order");
  return n * n * std::numbers::pi * std::numbers::pi * (1.0 - 2.0 / strength);
}

TBComparison tb_compare(const Lattice& lat, int n_max, const SolverConfig& cfg) {
  cfg.validate();
  if (n_max < 1) throw DomainError("tb_compare: n_max must be >= 1");
  if (!(lat.u() > 0.0) || !(lat.v() > 0.0)) {
    throw DomainError("tb_compare: strengths must be > 0");
  }
  if (n_max * std::numbers::pi > cfg.rho_max) {
    throw DomainError("tb_compare: n_max * pi exceeds cfg.rho_max");
  }

  TBComparison out;
  out.regime_warning = !in_tight_binding_regime(lat.u()) || !in_tight_binding_regime(lat.v());

  for (Family fam : {Family::kU, Family::kV}) {
    const double s = fam == Family::kU ? lat.u() : lat.v();
    // The n-th zero of g1 lies in ((n-1) pi, n pi).
    const auto roots = find_roots([s](double r) { return g1(r, s); }, kRhoEpsilon,
                                  n_max * std::numbers::pi, cfg);
    if (roots.size() < static_cast<std::size_t>(n_max)) {
      throw NumericalError("tb_compare: fewer g1 zeros than requested levels");
    }
    double c_fit = 0.0;
    for (int n = 1; n <= n_max; ++n) {
      TBLevel lv;
      lv.n = n;
      lv.family = fam;
      lv.rho_exact = roots[static_cast<std::size_t>(n - 1)];
      lv.rho_tb = rho_n_tb(n, s);
      lv.rel_err = std::abs(lv.rho_exact - lv.rho_tb) / lv.rho_exact;
      lv.energy_exact = lv.rho_exact * lv.rho_exact;
      lv.energy_tb = energy_n(n, s);
      lv.delta_n = delta_n(n, s);
      const double scale = n * std::numbers::pi / s;
      lv.within_bound = lv.rel_err <= 5.0 * scale * scale;
      c_fit = std::max(c_fit, lv.rel_err * s * s);
      out.levels.push_back(lv);
    }
    (fam == Family::kU ? out.c_fit_u : out.c_fit_v) = c_fit;
  }

  for (int n = 1; n <= n_max; ++n) {
    const double du = delta_n(n, lat.u());
    const double diff = du - delta_n(n, lat.v());
    out.delta_difference.push_back(diff);
    out.delta_difference_ratio.push_back(std::abs(diff) / (du * du));
  }
  return out;
}

}  // namespace conicband
