#include "conicband/dirac.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "conicband/bands.hpp"
#include "conicband/errors.hpp"
#include "conicband/tightbinding.hpp"

namespace conicband {
namespace {

constexpr double kMinSlopeDerivative = 1e-10;
constexpr double kSaddleValueTol = 1e-8;

using Intervals = std::vector<std::pair<double, double>>;

double strength_of(const Lattice& lat, Family f) { return f == Family::kU ? lat.u() : lat.v(); }

// Edges up to just past the band pair that meets at this candidate.
Intervals intervals_for(const Lattice& lat, const DiracPoint& dp, const SolverConfig& cfg) {
  const double needed = std::min(cfg.rho_max, (dp.order + 1) * std::numbers::pi);
  return band_intervals(lat, band_edges(lat, cfg, needed));
}

double gap_with(const Lattice& lat, const DiracPoint& dp, const SolverConfig& cfg,
                const Intervals& iv) {
  const BandPoint below = band_at_kappa(lat, kHalfPi, 2 * dp.order - 1, cfg, iv);
  const BandPoint above = band_at_kappa(lat, kHalfPi, 2 * dp.order, cfg, iv);
  return std::abs(above.energy - below.energy);
}

double fitted_with(const Lattice& lat, const DiracPoint& dp, const SolverConfig& cfg,
                   const FitWindow& w, const Intervals& iv, double slope_analytic, double gap) {
  if (!(w.dk_min > 0.0) || !(w.dk_max > w.dk_min) || w.dk_max > kHalfPi || w.points < 8) {
    throw DomainError("fermi_slope_fitted: need 0 < dk_min < dk_max <= pi/2 and >= 8 points");
  }
  if (gap > 2.0 * slope_analytic * w.dk_max) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "gap " << gap << " exceeds the fit window energy span "
        << 2.0 * slope_analytic * w.dk_max;
    throw FitUnreliableError(msg.str());
  }

  // Least squares of y = a + b x with x = dk^2, y = (half splitting)^2.
  const double log_lo = std::log(w.dk_min);
  const double log_step = (std::log(w.dk_max) - log_lo) / (w.points - 1);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < w.points; ++i) {
    const double dk = std::exp(log_lo + i * log_step);
    const double kappa = kHalfPi - dk;
    const double lo = band_at_kappa(lat, kappa, 2 * dp.order - 1, cfg, iv).energy;
    const double hi = band_at_kappa(lat, kappa, 2 * dp.order, cfg, iv).energy;
    const double half = 0.5 * (hi - lo);
    const double x = dk * dk;
    const double y = half * half;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = w.points;
  const double b = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  if (!(b > 0.0)) throw FitUnreliableError("non-positive fitted curvature");
  return std::sqrt(b);
}

}  // namespace

const char* family_name(Family f) { return f == Family::kU ? "u" : "v"; }

std::vector<DiracPoint> find_conical_candidates(const Lattice& lat, double rho_max,
                                                const SolverConfig& cfg) {
  cfg.validate();
  if (!(rho_max <= cfg.rho_max) || !(rho_max > kRhoEpsilon)) {
    throw DomainError("find_conical_candidates: rho_max must lie in (1e-12, cfg.rho_max]");
  }
  std::vector<DiracPoint> out;
  for (Family fam : {Family::kU, Family::kV}) {
    const double s = strength_of(lat, fam);
    const auto roots = find_roots([s](double r) { return g1(r, s); }, kRhoEpsilon, rho_max, cfg);
    int order = 0;
    for (double r : roots) {
      DiracPoint dp;
      dp.kappa_r = kHalfPi;
      dp.rho_s = r;
      dp.family = fam;
      dp.order = ++order;
      dp.energy = r * r;
      out.push_back(dp);
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const DiracPoint& a, const DiracPoint& b) { return a.rho_s < b.rho_s; });
  return out;
}

double fermi_slope_analytic(double rho_s, double strength) {
  const double d = g1_prime(rho_s, strength);
  if (std::abs(d) < kMinSlopeDerivative) {
    throw DegenerateSlopeError("fermi_slope_analytic: |g1'| vanishes at rho_s");
  }
  return 2.0 * rho_s / std::abs(d);
}

double fermi_slope_from_curvatures(double rho_s, double strength) {
  const double f2_curv = -4.0 * std::cos(2.0 * kHalfPi);
  const double g2_curv = g2_second(rho_s, Lattice(strength, strength));
  if (!(g2_curv > 0.0)) {
    throw DegenerateSlopeError("fermi_slope_from_curvatures: g2'' is not positive");
  }
  return std::sqrt(f2_curv / g2_curv) * 2.0 * rho_s;
}

double fermi_slope_fitted(const Lattice& lat, const DiracPoint& dp, const SolverConfig& cfg,
                          const FitWindow& window) {
  const Intervals iv = intervals_for(lat, dp, cfg);
  const double slope = fermi_slope_analytic(dp.rho_s, strength_of(lat, dp.family));
  return fitted_with(lat, dp, cfg, window, iv, slope, gap_with(lat, dp, cfg, iv));
}

double gap_at_edge(const Lattice& lat, const DiracPoint& dp, const SolverConfig& cfg) {
  return gap_with(lat, dp, cfg, intervals_for(lat, dp, cfg));
}

SaddleReport saddle_expansion(const Lattice& lat, const DiracPoint& dp, const SolverConfig& cfg,
                              double radius) {
  cfg.validate();
  const double k0 = kHalfPi;
  const double r0 = dp.rho_s;

  const double value = eigen_function(k0, r0, lat);
  const double dF_dk = -2.0 * std::sin(2.0 * k0);
  const double dF_dr = -g2_prime(r0, lat);

  SaddleReport rep;
  rep.d2F_dkappa2 = -4.0 * std::cos(2.0 * k0);
  rep.d2F_drho2 = -g2_second(r0, lat);
  rep.value_residual = std::abs(value);
  rep.grad_residual = std::hypot(dF_dk, dF_dr);

  const bool saddle = rep.d2F_dkappa2 * rep.d2F_drho2 < 0.0;
  const bool regime = lat.symmetric() ||
                      (lat.u() >= kTightBindingFloor && lat.v() >= kTightBindingFloor);
  if (!saddle || rep.value_residual > kSaddleValueTol || !regime) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "saddle_expansion: (pi/2, " << r0 << ") is not a conical point (F = " << value
        << ", F_kk * F_rr = " << rep.d2F_dkappa2 * rep.d2F_drho2 << ")";
    throw NotConicalPointError(msg.str());
  }
  rep.cone_slope = 2.0 * r0 * std::sqrt(-rep.d2F_dkappa2 / rep.d2F_drho2);

  constexpr int kRadii = 8;
  constexpr int kAngles = 32;
  double worst = 0.0;
  for (int i = 1; i <= kRadii; ++i) {
    const double r = radius * i / kRadii;
    for (int j = 0; j < kAngles; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / kAngles;
      const double dk = r * std::cos(phi);
      const double dr = r * std::sin(phi);
      const double model = 0.5 * rep.d2F_dkappa2 * dk * dk + 0.5 * rep.d2F_drho2 * dr * dr;
      worst = std::max(worst, std::abs(eigen_function(k0 + dk, r0 + dr, lat) - model));
    }
  }
  rep.quadratic_fit_error = worst;
  return rep;
}

DiracAnalysis analyze_dirac_points(const Lattice& lat, double rho_max, const SolverConfig& cfg,
                                   const FitWindow& window, double conical_ratio) {
  DiracAnalysis out;
  std::vector<DiracPoint> cands = find_conical_candidates(lat, rho_max, cfg);
  if (cands.empty()) return out;

  int max_order = 0;
  for (const auto& dp : cands) max_order = std::max(max_order, dp.order);
  const double needed = std::min(cfg.rho_max, (max_order + 1) * std::numbers::pi);
  const Intervals iv = band_intervals(lat, band_edges(lat, cfg, needed));

  for (DiracPoint& dp : cands) {
    dp.slope_analytic = fermi_slope_analytic(dp.rho_s, strength_of(lat, dp.family));
    dp.gap = gap_with(lat, dp, cfg, iv);
    std::string note;
    try {
      dp.slope_fitted = fitted_with(lat, dp, cfg, window, iv, dp.slope_analytic, dp.gap);
    } catch (const FitUnreliableError& e) {
      note = e.what();
    }
    out.conical.push_back(dp.gap <
                          conical_ratio * dp.slope_analytic * (window.dk_max - window.dk_min));
    out.fit_notes.push_back(std::move(note));
    out.points.push_back(dp);
  }
  return out;
}

}  // namespace conicband
