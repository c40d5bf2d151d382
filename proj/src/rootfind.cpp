#include "conicband/rootfind.hpp"

#include <cmath>
#include <sstream>

#include "conicband/errors.hpp"

namespace conicband {
namespace {

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

void SolverConfig::validate() const {
  if (!(abs_tol > 0.0)) throw DomainError("SolverConfig: abs_tol must be > 0");
  if (max_iter < 1) throw DomainError("SolverConfig: max_iter must be >= 1");
  if (!(scan_step > 0.0)) throw DomainError("SolverConfig: scan_step must be > 0");
  if (!(rho_max > scan_step) || !std::isfinite(rho_max)) {
    throw DomainError("SolverConfig: rho_max must be finite and > scan_step");
  }
}

std::vector<Bracket> scan_brackets(const ScalarFunction& f, double lo, double hi,
                                   const SolverConfig& cfg) {
  if (!(lo < hi)) throw DomainError("scan_brackets: need lo < hi");
  cfg.validate();

  const auto n = static_cast<long>(std::ceil((hi - lo) / cfg.scan_step));
  const double h = (hi - lo) / static_cast<double>(n);

  std::vector<Bracket> out;
  double x_prev = lo;
  double f_prev = f(lo);
  for (long i = 1; i <= n; ++i) {
    const double x = (i == n) ? hi : lo + static_cast<double>(i) * h;
    const double fx = f(x);
    const int s_prev = sign_of(f_prev);
    const int s = sign_of(fx);
    // An exact zero on a sample is reported once, by the interval ending there
    // (or starting there, for the very first sample).
    if (s_prev * s < 0 || s == 0 || (i == 1 && s_prev == 0)) {
      out.push_back({x_prev, x, f_prev, fx});
    }
    x_prev = x;
    f_prev = fx;
  }
  return out;
}

double refine(const ScalarFunction& f, const Bracket& b, const SolverConfig& cfg) {
  if (b.f_lo == 0.0) return b.lo;
  if (b.f_hi == 0.0) return b.hi;
  if (!(b.lo < b.hi) || sign_of(b.f_lo) * sign_of(b.f_hi) > 0) {
    throw DomainError("refine: invalid bracket");
  }

  double lo = b.lo;
  double hi = b.hi;
  const int s_lo = sign_of(b.f_lo);
  for (int iter = 0; iter < cfg.max_iter; ++iter) {
    const double mid = lo + 0.5 * (hi - lo);
    if (hi - lo <= cfg.abs_tol || mid <= lo || mid >= hi) {
      return mid;
    }
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if (sign_of(fm) == s_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (hi - lo <= cfg.abs_tol) return lo + 0.5 * (hi - lo);

  std::ostringstream msg;
  msg.precision(17);
  msg << "refine: no convergence after " << cfg.max_iter << " iterations, last interval ["
      << lo << ", " << hi << "]";
  throw ConvergenceError(msg.str(), lo, hi);
}

std::vector<double> find_roots(const ScalarFunction& f, double lo, double hi,
                               const SolverConfig& cfg) {
  std::vector<double> roots;
  for (const Bracket& b : scan_brackets(f, lo, hi, cfg)) {
    roots.push_back(refine(f, b, cfg));
  }
  return roots;
}

}  // namespace conicband
