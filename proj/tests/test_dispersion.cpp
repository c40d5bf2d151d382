#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "conicband/dispersion.hpp"
#include "conicband/errors.hpp"
#include "conicband/rootfind.hpp"

using namespace conicband;

namespace {

constexpr double kPi = std::numbers::pi;

// Test-side oracles, independent of the analytic derivative code.
template <class F>
double richardson(F f, double x, double h = 1e-3) {
  auto d = [&](double s) { return (f(x + s) - f(x - s)) / (2 * s); };
  return (4 * d(h / 2) - d(h)) / 3;
}

template <class F>
double stencil2(F f, double x, double h = 1e-3) {
  return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h);
}

double first_zero(double u) {
  SolverConfig cfg;
  auto roots = find_roots([u](double r) { return g1(r, u); }, kRhoEpsilon, kPi, cfg);
  return roots.at(0);
}

}  // namespace

TEST(Lattice, RejectsNegativeOrNonFinite) {
  EXPECT_THROW(Lattice(-1.0, 0.0), DomainError);
  EXPECT_THROW(Lattice(0.0, -1e-9), DomainError);
  EXPECT_THROW(Lattice(INFINITY, 1.0), DomainError);
  EXPECT_THROW(Lattice(NAN, 1.0), DomainError);
  EXPECT_NO_THROW(Lattice(0.0, 0.0));
}

TEST(F1, Examples) {
  EXPECT_DOUBLE_EQ(f1(0.0), 1.0);
  EXPECT_NEAR(f1(kPi / 2), 0.0, 1e-16);
  EXPECT_NEAR(f1(kPi / 3), 0.5, 1e-15);
}

TEST(F2, Examples) {
  EXPECT_DOUBLE_EQ(f2(kPi / 2), -1.0);
  EXPECT_DOUBLE_EQ(f2(0.0), 1.0);
  EXPECT_NEAR(f2(0.7), 2 * f1(0.7) * f1(0.7) - 1, 1e-15);
}

TEST(G1, Examples) {
  EXPECT_DOUBLE_EQ(g1(0.0, 3.0), 4.0);
  EXPECT_NEAR(g1(kPi, 0.0), -1.0, 1e-15);
  EXPECT_NEAR(g1(kPi, 7.0), -1.0, 1e-15);
  EXPECT_NEAR(g1(kPi / 2, 5.0), 10.0 / kPi, 1e-14);
}

TEST(G1, DomainErrors) {
  EXPECT_THROW(g1(-0.1, 1.0), DomainError);
  EXPECT_THROW(g1(1.0, -1.0), DomainError);
}

TEST(G2, Examples) {
  const Lattice lat(1.0, 2.0);
  EXPECT_DOUBLE_EQ(g2(0.0, lat), 11.0);
  EXPECT_NEAR(g2(1e-9, lat), 11.0, 1e-12);
  EXPECT_THROW(g2(-1.0, lat), DomainError);

  // Equal strengths: 2 g1^2 - 1 >= -1.
  const Lattice eq(3.0, 3.0);
  for (double r = 0.0; r < 30.0; r += 0.01) {
    const double a = g1(r, 3.0);
    EXPECT_NEAR(g2(r, eq), 2 * a * a - 1, 1e-12 * (1 + std::abs(g2(r, eq))));
    EXPECT_GE(g2(r, eq), -1.0 - 1e-12);
  }
}

TEST(G2, MinusOneAtZerosOfEitherFamily) {
  const double rs = first_zero(2.0);
  for (double v : {0.0, 0.5, 2.0, 5.0, 100.0}) {
    EXPECT_NEAR(g2(rs, Lattice(2.0, v)), -1.0, 1e-10) << "v = " << v;
  }
}

TEST(G1Prime, Examples) {
  EXPECT_NEAR(g1_prime(kPi / 2, 0.0), -1.0, 1e-15);
  EXPECT_NEAR(g1_prime(kPi, 3.0), -3.0 / kPi, 1e-14);
  const double oracle = richardson([](double x) { return g1(x, 5.0); }, 1.3);
  EXPECT_NEAR(g1_prime(1.3, 5.0), oracle, 1e-8);
  EXPECT_THROW(g1_prime(0.0, 1.0), DomainError);
  EXPECT_THROW(g1_prime(1e-13, 1.0), DomainError);
}

TEST(G2Prime, Examples) {
  // Equal strengths: the first derivative vanishes at zeros of g1.
  const double r5 = first_zero(5.0);
  EXPECT_NEAR(g2_prime(r5, Lattice(5.0, 5.0)), 0.0, 1e-9);

  // u = 2, v = 5 at a zero of g1(., 2): 2 (v - u) sinc g1'.
  const double r2 = first_zero(2.0);
  const double expect = 2.0 * 3.0 * std::sin(r2) / r2 * g1_prime(r2, 2.0);
  EXPECT_NEAR(g2_prime(r2, Lattice(2.0, 5.0)), expect, 1e-9);

  const Lattice lat(1.0, 4.0);
  const double oracle = richardson([&](double x) { return g2(x, lat); }, 0.9);
  EXPECT_NEAR(g2_prime(0.9, lat), oracle, 1e-8);
  EXPECT_THROW(g2_prime(0.0, lat), DomainError);
}

TEST(G2Second, Examples) {
  EXPECT_NEAR(g2_second(kPi / 2, Lattice(0.0, 0.0)), 4.0, 1e-14);
  for (double u : {0.5, 5.0, 20.0}) {
    const double r = first_zero(u);
    const double d = g1_prime(r, u);
    EXPECT_NEAR(g2_second(r, Lattice(u, u)), 4 * d * d, 1e-9) << "u = " << u;
    EXPECT_GT(g2_second(r, Lattice(u, u)), 0.0);
  }
  const Lattice lat(2.0, 7.0);
  const double oracle = stencil2([&](double x) { return g2(x, lat); }, 2.4);
  EXPECT_NEAR(g2_second(2.4, lat), oracle, 1e-6);
  EXPECT_THROW(g2_second(-1.0, lat), DomainError);
}

TEST(Identities, DoubleAngleOnDenseGrid) {
  double worst = 0.0;
  for (int i = 0; i <= 10000; ++i) {
    const double k = -kPi + 2 * kPi * i / 10000.0;
    worst = std::max(worst, std::abs(f2(k) - (2 * f1(k) * f1(k) - 1)));
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(Identities, ProductForm) {
  const double strengths[] = {0.0, 0.5, 1.0, 5.0, 100.0};
  for (double u : strengths) {
    for (double v : strengths) {
      const Lattice lat(u, v);
      for (int i = 0; i <= 2000; ++i) {
        const double r = kRhoEpsilon + (50.0 - kRhoEpsilon) * i / 2000.0;
        const double g = g2(r, lat);
        ASSERT_LE(std::abs(g - (2 * g1(r, u) * g1(r, v) - 1)), 1e-10 * (1 + std::abs(g)))
            << "u=" << u << " v=" << v << " rho=" << r;
      }
    }
  }
}

TEST(Properties, DerivativesMatchFiniteDifferences) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> rho(0.05, 50.0);
  std::uniform_real_distribution<double> str(0.0, 100.0);
  for (int i = 0; i < 100; ++i) {
    const double r = rho(rng);
    const Lattice lat(str(rng), str(rng));
    const double u = lat.u();
    const double d1 = g1_prime(r, u);
    EXPECT_NEAR(d1, richardson([u](double x) { return g1(x, u); }, r), 1e-8 * (1 + std::abs(d1)));
    const double d2 = g2_prime(r, lat);
    EXPECT_NEAR(d2, richardson([&](double x) { return g2(x, lat); }, r), 1e-8 * (1 + std::abs(d2)));
    const double s2 = g2_second(r, lat);
    EXPECT_NEAR(s2, stencil2([&](double x) { return g2(x, lat); }, r), 1e-6 * (1 + std::abs(s2)));
  }
}

TEST(Properties, SmallRhoSeriesSwitchIsContinuous) {
  const double below = std::nextafter(kSincSeriesThreshold, 0.0);
  const double above = kSincSeriesThreshold;
  for (double u : {0.0, 1.0, 10.0}) {
    EXPECT_LE(std::abs(g1(below, u) - g1(above, u)), 1e-13);
    const Lattice lat(u, 0.5 * u);
    EXPECT_LE(std::abs(g2(below, lat) - g2(above, lat)), 1e-13);
  }
  // With strong deltas g2(0) ~ 1e4; absolute 1e-13 is below its ulp, so compare relatively.
  const Lattice strong(100.0, 50.0);
  const double g = g2(above, strong);
  EXPECT_LE(std::abs(g2(below, strong) - g), 1e-13 * std::abs(g));
  EXPECT_LE(std::abs(g1(below, 100.0) - g1(above, 100.0)), 1e-13);
  // 2 rho crosses the threshold inside g2 at half the value.
  const Lattice lat(3.0, 4.0);
  EXPECT_LE(std::abs(g2(std::nextafter(kSincSeriesThreshold / 2, 0.0), lat) -
                     g2(kSincSeriesThreshold / 2, lat)),
            1e-13);
}

TEST(Properties, PlusEdgeKernelFactorsG2MinusOne) {
  const Lattice lat(2.0, 5.0);
  for (double r = 0.01; r < 40.0; r += 0.037) {
    EXPECT_NEAR(g2(r, lat) - 1.0, 2.0 * std::sin(r) * plus_edge_kernel(r, lat),
                1e-11 * (1 + std::abs(g2(r, lat))));
  }
}
