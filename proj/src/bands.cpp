#include "conicband/bands.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>
#include <string>
#include <thread>

#include "conicband/errors.hpp"

namespace conicband {
namespace {

void append_roots(std::vector<BandEdge>& edges, const ScalarFunction& f, double rho_max,
                  const SolverConfig& cfg, EdgeKind kind, bool tangent) {
  for (double r : find_roots(f, kRhoEpsilon, rho_max, cfg)) {
    edges.push_back({r, kind, tangent});
  }
}

std::string kappa_context(int band, double kappa) {
  std::ostringstream os;
  os.precision(17);
  os << " (band " << band << ", kappa " << kappa << ")";
  return os.str();
}

}  // namespace

std::vector<BandEdge> band_edges(const Lattice& lat, const SolverConfig& cfg, double rho_max) {
  cfg.validate();
  if (!(rho_max <= cfg.rho_max) || !(rho_max > kRhoEpsilon)) {
    throw DomainError("band_edges: rho_max must lie in (1e-12, cfg.rho_max]");
  }
  const double u = lat.u();
  const double v = lat.v();
  std::vector<BandEdge> edges;

  // g2 = -1: zeros of g1(., u) and g1(., v).
  append_roots(edges, [u](double r) { return g1(r, u); }, rho_max, cfg, EdgeKind::kMinusOne,
               lat.symmetric());
  if (!lat.symmetric()) {
    append_roots(edges, [v](double r) { return g1(r, v); }, rho_max, cfg,
                 EdgeKind::kMinusOne, false);
  }

  // g2 = +1: rho = m pi exactly, plus the zeros of the kernel. For u = v = 0 the kernel
  // is -sin(rho) and the two families coincide.
  const bool free = (u + v) == 0.0;
  for (int m = 1; m * std::numbers::pi <= rho_max; ++m) {
    edges.push_back({m * std::numbers::pi, EdgeKind::kPlusOne, free});
  }
  if (!free) {
    append_roots(edges, [&lat](double r) { return plus_edge_kernel(r, lat); }, rho_max, cfg,
                 EdgeKind::kPlusOne, false);
  }

  std::sort(edges.begin(), edges.end(),
            [](const BandEdge& a, const BandEdge& b) { return a.rho < b.rho; });
  return edges;
}

std::vector<std::pair<double, double>> band_intervals(const Lattice& lat,
                                                      const std::vector<BandEdge>& edges) {
  std::vector<BandEdge> expanded;
  if (lat.u() + lat.v() == 0.0) {
    expanded.push_back({0.0, EdgeKind::kPlusOne, false});
  }
  for (const BandEdge& e : edges) {
    expanded.push_back(e);
    if (e.tangent) expanded.push_back(e);
  }

  // Allowed bands alternate +1 -> -1 and -1 -> +1 in the discriminant.
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i + 1 < expanded.size(); i += 2) {
    const BandEdge& lo = expanded[i];
    const BandEdge& hi = expanded[i + 1];
    const std::size_t band = i / 2;
    const EdgeKind expect_lo = (band % 2 == 0) ? EdgeKind::kPlusOne : EdgeKind::kMinusOne;
    if (lo.kind != expect_lo || hi.kind == lo.kind) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "band_intervals: edge pattern broken at band " << band + 1 << " near rho "
          << lo.rho << " (missed or spurious edge)";
      throw NumericalError(msg.str());
    }
    out.emplace_back(lo.rho, hi.rho);
  }
  return out;
}

BandPoint band_at_kappa(const Lattice& lat, double kappa, int n, const SolverConfig& cfg) {
  return band_at_kappa(lat, kappa, n, cfg, band_intervals(lat, band_edges(lat, cfg, cfg.rho_max)));
}

BandPoint band_at_kappa(const Lattice& lat, double kappa, int n, const SolverConfig& cfg,
                        const std::vector<std::pair<double, double>>& intervals) {
  if (!(std::abs(kappa) <= kHalfPi)) {
    throw DomainError("band_at_kappa: kappa must lie in [-pi/2, pi/2]");
  }
  if (n < 1) throw DomainError("band_at_kappa: band index must be >= 1");
  if (static_cast<std::size_t>(n) > intervals.size()) {
    std::ostringstream msg;
    msg << "band_at_kappa: only " << intervals.size() << " bands below rho_max "
        << cfg.rho_max << kappa_context(n, kappa);
    throw BandNotFoundError(msg.str());
  }

  const auto [lo, hi] = intervals[static_cast<std::size_t>(n - 1)];
  const double level = f2(kappa);
  auto f = [&lat, level](double r) { return g2(r, lat) - level; };

  // Odd bands run from a +1 edge up to a -1 edge, even bands the other way. At the zone
  // centre and edge the level sits on an edge, which may be a tangency that bisection
  // would resolve only to sqrt(rounding).
  const bool odd = n % 2 == 1;
  const double minus_end = odd ? hi : lo;
  const double plus_end = odd ? lo : hi;

  double rho;
  if (lo == hi) {
    rho = lo;
  } else if (level <= -1.0) {
    rho = minus_end;
  } else if (level >= 1.0) {
    rho = plus_end;
  } else {
    const double f_lo = f(lo);
    const double f_hi = f(hi);
    if (f_lo * f_hi > 0.0) {
      // level is within rounding of +-1: the root is the nearer edge.
      rho = std::abs(f_lo) <= std::abs(f_hi) ? lo : hi;
    } else {
      try {
        rho = refine(f, {lo, hi, f_lo, f_hi}, cfg);
      } catch (const ConvergenceError& e) {
        throw ConvergenceError(e.what() + kappa_context(n, kappa), e.lo(), e.hi());
      }
    }
  }
  return {kappa, rho, rho * rho};
}

std::vector<double> kappa_grid(int n_kappa) {
  if (n_kappa < 2) throw DomainError("kappa_grid: need at least 2 points");
  std::vector<double> grid(static_cast<std::size_t>(n_kappa));
  const int last = n_kappa - 1;
  for (int i = 0; i < n_kappa; ++i) {
    grid[static_cast<std::size_t>(i)] =
        kHalfPi * (static_cast<double>(2 * i - last) / static_cast<double>(last));
  }
  return grid;
}

std::vector<Band> band_structure(const Lattice& lat, int n_bands, int n_kappa,
                                 const SolverConfig& cfg, unsigned threads) {
  if (n_bands < 1) throw DomainError("band_structure: n_bands must be >= 1");
  const std::vector<double> grid = kappa_grid(n_kappa);
  const auto intervals = band_intervals(lat, band_edges(lat, cfg, cfg.rho_max));
  if (static_cast<std::size_t>(n_bands) > intervals.size()) {
    std::ostringstream msg;
    msg << "band_structure: requested " << n_bands << " bands but only " << intervals.size()
        << " lie below rho_max " << cfg.rho_max;
    throw BandNotFoundError(msg.str());
  }

  std::vector<Band> bands(static_cast<std::size_t>(n_bands));
  for (int b = 0; b < n_bands; ++b) {
    bands[b].index = b + 1;
    bands[b].edges = intervals[static_cast<std::size_t>(b)];
    bands[b].points.resize(grid.size());
  }

  // One slot per kappa column; the first failure in grid order wins.
  std::vector<std::exception_ptr> failures(grid.size());
  auto solve_column = [&](std::size_t k) {
    try {
      for (int b = 0; b < n_bands; ++b) {
        bands[b].points[k] = band_at_kappa(lat, grid[k], b + 1, cfg, intervals);
      }
    } catch (...) {
      failures[k] = std::current_exception();
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(grid.size()));
  if (threads <= 1) {
    for (std::size_t k = 0; k < grid.size(); ++k) solve_column(k);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t k = t; k < grid.size(); k += threads) solve_column(k);
      });
    }
  }

  for (const auto& ex : failures) {
    if (ex) std::rethrow_exception(ex);
  }
  return bands;
}

}  // namespace conicband
