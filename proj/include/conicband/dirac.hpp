#pragma once

#include <optional>
#include <string>
#include <vector>

#include "conicband/dispersion.hpp"
#include "conicband/rootfind.hpp"

namespace conicband {

/// Which strength's g1 vanishes at the candidate.
enum class Family { kU, kV };

const char* family_name(Family f);

/// Conical-point candidate at the zone edge kappa = pi/2, where g2 = -1.
struct DiracPoint {
  double kappa_r = 0.0;
  double rho_s = 0.0;
  Family family = Family::kU;
  /// 1-based index of the zero within its family; it sits in ((order-1) pi, order pi)
  /// and separates bands 2*order-1 and 2*order.
  int order = 0;
  double energy = 0.0;
  double slope_analytic = 0.0;
  std::optional<double> slope_fitted;
  double gap = 0.0;
};

/// Offsets below the zone edge used for the cone fit.
struct FitWindow {
  double dk_min = 1e-4;
  double dk_max = 1e-2;
  int points = 16;  // log-spaced, >= 8
};

struct SaddleReport {
  double d2F_dkappa2 = 0.0;
  double d2F_drho2 = 0.0;
  double value_residual = 0.0;
  double grad_residual = 0.0;
  double quadratic_fit_error = 0.0;
  /// Slope d(eps)/d(kappa) of the light cone of the quadratic form.
  double cone_slope = 0.0;
};

/// Zeros of g1(., u) and g1(., v) in (kRhoEpsilon, rho_max], paired with kappa_r = pi/2.
/// Both families are always listed, even when u == v; sorted by rho, then family.
std::vector<DiracPoint> find_conical_candidates(const Lattice& lat, double rho_max,
                                                const SolverConfig& cfg);

/// 2 rho_s / |g1'(rho_s)|. Throws DegenerateSlopeError when |g1'| < 1e-10.
double fermi_slope_analytic(double rho_s, double strength);

/// sqrt(f2'' / g2'') * 2 rho_s with both curvatures taken from the dispersion kernels,
/// g2'' evaluated for equal strengths.
double fermi_slope_from_curvatures(double rho_s, double strength);

/// Slope of the cone measured on the two adjacent bands. Fits the squared half splitting
/// ((eps_above - eps_below)/2)^2 = a + s^2 dk^2 by least squares over the window, which
/// reduces to a straight cone when the gap is closed.
/// Throws FitUnreliableError when the edge gap exceeds 2 * slope_analytic * dk_max.
double fermi_slope_fitted(const Lattice& lat, const DiracPoint& dp, const SolverConfig& cfg,
                          const FitWindow& window = {});

/// |eps_{2n} - eps_{2n-1}| at kappa = pi/2 from the band solver, n = dp.order.
double gap_at_edge(const Lattice& lat, const DiracPoint& dp, const SolverConfig& cfg);

/// Taylor data of F = f2 - g2 at (pi/2, rho_s). The quadratic form is
/// F ~ (1/2) F_kk dk^2 + (1/2) F_rr dr^2; the fit error is sampled on a disc of `radius`.
/// Throws NotConicalPointError unless F vanishes, the point is a saddle, and (for u != v)
/// both strengths are in the tight-binding regime.
SaddleReport saddle_expansion(const Lattice& lat, const DiracPoint& dp, const SolverConfig& cfg,
                              double radius = 1e-3);

/// Candidate list with slopes and gaps filled, sorted by energy. A fit failure leaves
/// slope_fitted empty and records the reason in `fit_notes` (same order).
struct DiracAnalysis {
  std::vector<DiracPoint> points;
  std::vector<std::string> fit_notes;
  std::vector<bool> conical;
};

/// A candidate is conical when gap < conical_ratio * slope_analytic * (dk_max - dk_min).
DiracAnalysis analyze_dirac_points(const Lattice& lat, double rho_max, const SolverConfig& cfg,
                                   const FitWindow& window = {}, double conical_ratio = 0.05);

}  // namespace conicband
