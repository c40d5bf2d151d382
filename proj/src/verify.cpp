#include "conicband/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "conicband/bands.hpp"
#include "conicband/dirac.hpp"
#include "conicband/errors.hpp"
#include "conicband/tightbinding.hpp"
#include "conicband/transfer.hpp"

namespace conicband {
namespace {

// splitmix64; the standard distributions are not portable bit-for-bit.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : state_(seed) {}

  double uniform(double lo, double hi) {
    const double unit = static_cast<double>(next() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * unit;
  }

 private:
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

CheckResult make(std::string name, double residual, double tol) {
  return {std::move(name), residual, tol, residual <= tol};
}

constexpr double kCandidateRhoMax = 15.0;

}  // namespace

double richardson_derivative(const ScalarFunction& f, double x, double h) {
  auto central = [&](double step) { return (f(x + step) - f(x - step)) / (2.0 * step); };
  return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

double five_point_second(const ScalarFunction& f, double x, double h) {
  return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) /
         (12 * h * h);
}

std::vector<CheckResult> run_verification(const Lattice& lat, int samples, std::uint64_t seed,
                                          const SolverConfig& cfg) {
  if (samples < 2) throw DomainError("run_verification: samples must be >= 2");
  std::vector<CheckResult> out;
  Sampler rng(seed);
  const double u = lat.u();
  const double v = lat.v();

  {
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
      const double k = -std::numbers::pi + 2.0 * std::numbers::pi * i / (samples - 1);
      const double a = f1(k);
      worst = std::max(worst, std::abs(f2(k) - (2.0 * a * a - 1.0)));
    }
    out.push_back(make("identity_f2_double_angle", worst, 1e-12));
  }
  {
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
      const double r = kRhoEpsilon + (50.0 - kRhoEpsilon) * i / (samples - 1);
      const double g = g2(r, lat);
      worst = std::max(worst, std::abs(g - (2.0 * g1(r, u) * g1(r, v) - 1.0)) / (1.0 + std::abs(g)));
    }
    out.push_back(make("identity_g2_product", worst, 1e-10));
  }
  {
    // -1 is the minimum of the equal-strength discriminant; allow rounding only.
    double worst = 0.0;
    for (double s : {u, v}) {
      const Lattice eq(s, s);
      for (int i = 0; i < samples; ++i) {
        const double r = kRhoEpsilon + (50.0 - kRhoEpsilon) * i / (samples - 1);
        worst = std::max(worst, -1.0 - g2(r, eq));
      }
    }
    out.push_back(make("g2_equal_strength_lower_bound", std::max(worst, 0.0), 1e-12));
  }
  {
    double first = 0.0;
    double second = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double r = rng.uniform(0.1, 50.0);
      const double d1 = g1_prime(r, u);
      const double d1_fd = richardson_derivative([u](double x) { return g1(x, u); }, r);
      const double d2 = g2_prime(r, lat);
      const double d2_fd = richardson_derivative([&lat](double x) { return g2(x, lat); }, r);
      first = std::max(first, std::abs(d1 - d1_fd) / (1.0 + std::abs(d1)));
      first = std::max(first, std::abs(d2 - d2_fd) / (1.0 + std::abs(d2)));
      const double s2 = g2_second(r, lat);
      const double s2_fd = five_point_second([&lat](double x) { return g2(x, lat); }, r);
      second = std::max(second, std::abs(s2 - s2_fd) / (1.0 + std::abs(s2)));
    }
    out.push_back(make("derivatives_first_vs_richardson", first, 1e-8));
    out.push_back(make("derivatives_second_vs_stencil", second, 1e-6));
  }
  {
    double trace = 0.0;
    double det = 0.0;
    double swap = 0.0;
    const Lattice swapped(v, u);
    for (int i = 0; i < samples; ++i) {
      const double r = rng.uniform(0.01, 50.0);
      const double g = g2(r, lat);
      const double t = dispersion_from_trace(lat, r);
      trace = std::max(trace, std::abs(t - g) / (1.0 + std::abs(g)));
      det = std::max(det, static_cast<double>(std::abs(period_matrix(lat, r).determinant() - 1.0L)));
      swap = std::max(swap, std::abs(t - dispersion_from_trace(swapped, r)) / (1.0 + std::abs(g)));
    }
    out.push_back(make("transfer_half_trace_vs_g2", trace, 1e-9));
    out.push_back(make("transfer_determinant", det, 1e-12));
    out.push_back(make("transfer_trace_uv_symmetry", swap, 1e-9));
  }
  {
    // Sign changes of g2 + 1 against the g1 zero families. For u == v the level is only
    // touched, so the direct scan must come back empty instead.
    const auto minus = [&] {
      std::vector<double> r;
      for (const BandEdge& e : band_edges(lat, cfg, kCandidateRhoMax)) {
        if (e.kind == EdgeKind::kMinusOne) r.push_back(e.rho);
      }
      return r;
    }();
    const auto direct =
        find_roots([&lat](double r) { return g2(r, lat) + 1.0; }, kRhoEpsilon, kCandidateRhoMax, cfg);
    double worst = 0.0;
    if (lat.symmetric()) {
      worst = direct.empty() ? 0.0 : 1.0;
      for (double r : minus) worst = std::max(worst, std::abs(g2(r, lat) + 1.0));
    } else if (direct.size() != minus.size()) {
      worst = 1.0;
    } else {
      for (std::size_t i = 0; i < direct.size(); ++i) {
        worst = std::max(worst, std::abs(direct[i] - minus[i]));
      }
    }
    out.push_back(make("minus_one_edges_factorization", worst, 1e-10));
  }
  {
    const auto bands = band_structure(lat, 4, 201, cfg);
    double residual = 0.0;
    for (const Band& b : bands) {
      for (const BandPoint& p : b.points) {
        residual = std::max(residual, std::abs(f2(p.kappa) - g2(p.rho, lat)));
      }
    }
    out.push_back(make("band_residual", residual, 1e-9));

    if (u == 0.0 && v == 0.0) {
      double worst = 0.0;
      for (const Band& b : bands) {
        const int m = b.index;
        for (const BandPoint& p : b.points) {
          // Folded parabola: odd bands rise from floor(m/2) pi, even bands fall back to it.
          const double ak = std::abs(p.kappa);
          const double half = (m / 2) * std::numbers::pi;
          const double rho = (m % 2 == 1) ? half + ak : half - ak;
          worst = std::max(worst, std::abs(p.energy - rho * rho));
        }
      }
      out.push_back(make("free_particle_folding", worst, 1e-10));
    }
  }
  {
    const auto cands = find_conical_candidates(lat, kCandidateRhoMax, cfg);
    double on_level = 0.0;
    for (const DiracPoint& dp : cands) on_level = std::max(on_level, std::abs(g2(dp.rho_s, lat) + 1.0));
    out.push_back(make("candidates_on_minus_one", on_level, 1e-10));

    double forms = 0.0;
    for (const DiracPoint& dp : cands) {
      const double s = dp.family == Family::kU ? u : v;
      const double a = fermi_slope_analytic(dp.rho_s, s);
      forms = std::max(forms, std::abs(a - fermi_slope_from_curvatures(dp.rho_s, s)) / a);
    }
    out.push_back(make("fermi_slope_two_forms", forms, 1e-12));

    if (lat.symmetric()) {
      double gap = 0.0;
      double slope = 0.0;
      double value = 0.0;
      double grad = 0.0;
      double curv_k = 0.0;
      double curv_r = 0.0;
      double quad = 0.0;
      bool saddle = true;
      for (const DiracPoint& dp : cands) {
        if (dp.family != Family::kU) continue;
        gap = std::max(gap, gap_at_edge(lat, dp, cfg));
        const double a = fermi_slope_analytic(dp.rho_s, u);
        slope = std::max(slope, std::abs(fermi_slope_fitted(lat, dp, cfg) - a) / a);
        const SaddleReport rep = saddle_expansion(lat, dp, cfg);
        const double d = g1_prime(dp.rho_s, u);
        value = std::max(value, rep.value_residual);
        grad = std::max(grad, rep.grad_residual);
        curv_k = std::max(curv_k, std::abs(rep.d2F_dkappa2 - 4.0));
        curv_r = std::max(curv_r, std::abs(rep.d2F_drho2 + 4.0 * d * d));
        quad = std::max(quad, rep.quadratic_fit_error);
        saddle = saddle && rep.d2F_dkappa2 * rep.d2F_drho2 < 0.0;
      }
      out.push_back(make("gap_closure_at_zone_edge", gap, 1e-8));
      out.push_back(make("fermi_slope_fit_rel_err", slope, 1e-2));
      out.push_back(make("saddle_value", value, 1e-8));
      out.push_back(make("saddle_gradient", grad, 1e-8));
      out.push_back(make("saddle_d2F_dkappa2_minus_4", curv_k, 0.0));
      out.push_back(make("saddle_d2F_drho2_vs_g1_prime", curv_r, 1e-9));
      out.push_back(make("saddle_signature", saddle ? 0.0 : 1.0, 0.0));
      out.push_back(make("saddle_quadratic_model", quad, 1e-6));
    }
  }
  if (in_tight_binding_regime(u) && in_tight_binding_regime(v)) {
    const auto cmp = tb_compare(lat, 3, cfg);
    double worst = 0.0;
    for (const TBLevel& lv : cmp.levels) {
      const double s = lv.family == Family::kU ? u : v;
      const double bound = 5.0 * std::pow(lv.n * std::numbers::pi / s, 2);
      worst = std::max(worst, lv.rel_err / bound);
    }
    out.push_back(make("tight_binding_rel_err_over_bound", worst, 1.0));
  }
  return out;
}

}  // namespace conicband
