#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "conicband/cli.hpp"

using namespace conicband;
using cli::Json;

namespace {

constexpr double kPi = std::numbers::pi;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "conicband");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

class TempDir {
 public:
  TempDir() : path_(std::filesystem::temp_directory_path() / ("conicband_cli_" + std::to_string(::getpid()))) {
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace

TEST(FormatDouble, RoundTripsAndKeepsPrecision) {
  for (double x : {0.1, kPi, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 0.0}) {
    EXPECT_EQ(std::strtod(cli::format_double(x).c_str(), nullptr), x);
  }
  EXPECT_EQ(cli::format_double(kPi), "3.1415926535897931");
}

TEST(Bands, FreeParticleCsv) {
  const Result r = run({"bands", "--u", "0", "--v", "0", "--bands", "2", "--kpoints", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 7u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"band", "kappa", "rho", "energy"}));
  // band 1, kappa = 0 is the middle row of the first band
  EXPECT_EQ(rows[2][0], "1");
  EXPECT_EQ(std::stod(rows[2][1]), 0.0);
  EXPECT_NEAR(std::stod(rows[2][3]), 0.0, 1e-12);
  EXPECT_EQ(r.out.find('\r'), std::string::npos);
}

TEST(Bands, EqualStrengthsShareZoneEdgeEnergy) {
  const Result r = run({"bands", "--u", "5", "--v", "5", "--bands", "2", "--kpoints", "11"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  // rows 1..11 band 1, 12..22 band 2; first and last kappa are -pi/2, +pi/2
  EXPECT_EQ(rows[1][3], rows[12][3]);
  EXPECT_EQ(rows[11][3], rows[22][3]);
}

TEST(Bands, JsonRoundTrip) {
  const Result r = run({"bands", "--u", "2", "--v", "3", "--bands", "3", "--kpoints", "9",
                        "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j.at("manifest").at("command"), "bands");
  const auto bands = cli::bands_from_json(j);
  const auto direct = band_structure(Lattice(2.0, 3.0), 3, 9, {});
  ASSERT_EQ(bands.size(), direct.size());
  for (std::size_t b = 0; b < bands.size(); ++b) {
    EXPECT_EQ(bands[b].index, direct[b].index);
    EXPECT_EQ(bands[b].edges, direct[b].edges);
    for (std::size_t k = 0; k < bands[b].points.size(); ++k) {
      EXPECT_EQ(bands[b].points[k].kappa, direct[b].points[k].kappa);
      EXPECT_EQ(bands[b].points[k].rho, direct[b].points[k].rho);
      EXPECT_EQ(bands[b].points[k].energy, direct[b].points[k].energy);
    }
  }
}

TEST(Bands, CsvValuesMatchInMemoryBitForBit) {
  const Result r = run({"bands", "--u", "1.5", "--v", "4", "--bands", "2", "--kpoints", "7"});
  ASSERT_EQ(r.code, 0);
  const auto rows = parse_csv(r.out);
  const auto direct = band_structure(Lattice(1.5, 4.0), 2, 7, {});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& p = direct[(i - 1) / 7].points[(i - 1) % 7];
    EXPECT_EQ(std::strtod(rows[i][2].c_str(), nullptr), p.rho);
    EXPECT_EQ(std::strtod(rows[i][3].c_str(), nullptr), p.energy);
  }
}

TEST(Bands, ManifestReplayIsBitIdentical) {
  TempDir dir;
  const std::string out = dir.file("bands.csv");
  ASSERT_EQ(run({"bands", "--u", "3", "--v", "9", "--bands", "3", "--kpoints", "21", "--tol",
                 "1e-13", "--out", out})
                .code,
            0);
  const Json manifest = Json::parse(slurp(out + ".manifest.json"));
  EXPECT_EQ(manifest.at("solver").at("abs_tol"), 1e-13);
  EXPECT_EQ(manifest.at("tool_version"), cli::kToolVersion);
  EXPECT_FALSE(manifest.at("timestamp").get<std::string>().empty());

  const std::string replay = dir.file("replay.csv");
  ASSERT_EQ(run({"bands", "--manifest", out + ".manifest.json", "--out", replay}).code, 0);
  EXPECT_EQ(slurp(out), slurp(replay));

  EXPECT_EQ(run({"bands", "--manifest", out + ".manifest.json", "--u", "1"}).code, 2);
  EXPECT_EQ(run({"dirac", "--manifest", out + ".manifest.json"}).code, 2);
}

TEST(Bands, ThreadEnvDoesNotChangeOutput) {
  ::setenv("CONICBAND_THREADS", "1", 1);
  const Result a = run({"bands", "--u", "3", "--v", "4", "--kpoints", "51"});
  ::setenv("CONICBAND_THREADS", "3", 1);
  const Result b = run({"bands", "--u", "3", "--v", "4", "--kpoints", "51"});
  ::unsetenv("CONICBAND_THREADS");
  EXPECT_EQ(a.out, b.out);
}

TEST(Bands, UsageErrors) {
  EXPECT_EQ(run({"bands", "--u", "1"}).code, 2);
  EXPECT_EQ(run({"bands", "--u", "-1", "--v", "1"}).code, 2);
  EXPECT_EQ(run({"bands", "--u", "1", "--v", "1", "--format", "xml"}).code, 2);
  EXPECT_EQ(run({"bands", "--u", "1", "--v", "1", "--kpoints", "1"}).code, 2);
  EXPECT_EQ(run({"bands", "--u", "x", "--v", "1"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
}

TEST(Bands, NumericalFailureNamesBand) {
  const Result r = run({"bands", "--u", "1", "--v", "1", "--bands", "40", "--rho-max", "10"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("band"), std::string::npos);
}

TEST(Dirac, FreeParticle) {
  const Result r = run({"dirac", "--u", "0", "--v", "0", "--max-energy", "30"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  ASSERT_EQ(j.size(), 2u);
  EXPECT_NEAR(j[0]["rho_s"].get<double>(), kPi / 2, 1e-12);
  EXPECT_NEAR(j[1]["rho_s"].get<double>(), 3 * kPi / 2, 1e-12);
  EXPECT_NEAR(j[0]["slope_analytic"].get<double>(), kPi, 1e-12);
  EXPECT_NEAR(j[1]["slope_analytic"].get<double>(), 3 * kPi, 1e-12);
  const std::vector<std::string> keys{"kappa_r", "rho_s", "family", "energy", "slope_analytic",
                                      "slope_fitted", "gap", "conical"};
  std::vector<std::string> got;
  for (const auto& [k, _] : j[0].items()) got.push_back(k);
  EXPECT_EQ(got, keys);
}

TEST(Dirac, EqualStrengthsGapsClosed) {
  const Result r = run({"dirac", "--u", "7", "--v", "7"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  ASSERT_FALSE(j.empty());
  for (const Json& p : j) {
    EXPECT_LE(p["gap"].get<double>(), 1e-8);
    EXPECT_EQ(p["family"], "uv");
    EXPECT_TRUE(p["conical"].get<bool>());
  }
}

TEST(Dirac, TightBindingGap) {
  const Result r = run({"dirac", "--u", "100", "--v", "110"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  const double tb = 2 * kPi * kPi * (1.0 / 100 - 1.0 / 110);
  EXPECT_NEAR(j[0]["gap"].get<double>(), tb, 0.2 * tb);
  for (std::size_t i = 1; i < j.size(); ++i) {
    EXPECT_LE(j[i - 1]["energy"].get<double>(), j[i]["energy"].get<double>());
  }
}

TEST(Dirac, UnreliableFitIsNullWithReason) {
  const Result r = run({"dirac", "--u", "2", "--v", "5", "--max-energy", "20"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  ASSERT_FALSE(j.empty());
  EXPECT_TRUE(j[0]["slope_fitted"].is_null());
  EXPECT_TRUE(j[0]["reason"].is_string());
}

TEST(Dirac, UsageErrors) {
  EXPECT_EQ(run({"dirac", "--u", "1", "--v", "1", "--fit-window", "1e-5"}).code, 2);
  EXPECT_EQ(run({"dirac", "--u", "1", "--v", "1", "--max-energy", "-3"}).code, 2);
  EXPECT_EQ(run({"dirac", "--u", "1", "--v", "1", "--max-energy", "5000"}).code, 2);
}

TEST(Tb, ColumnsAndAccuracy) {
  const Result r = run({"tb", "--u", "100", "--v", "100", "--nmax", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.err.empty());
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"n", "family", "rho_exact", "rho_tb", "rel_err",
                                               "energy_exact", "energy_tb", "delta_n"}));
  EXPECT_LE(std::stod(rows[1][4]), 1e-3);
  EXPECT_NEAR(std::stod(rows[1][6]), kPi * kPi * 0.99 * 0.99, 1e-12);

  const Result hi = run({"tb", "--u", "1000", "--v", "1000", "--nmax", "1"});
  EXPECT_LE(std::stod(parse_csv(hi.out)[1][4]), 1e-5);
}

TEST(Tb, WarningsAndErrors) {
  const Result weak = run({"tb", "--u", "5", "--v", "50", "--nmax", "2"});
  EXPECT_EQ(weak.code, 0);
  EXPECT_NE(weak.err.find("warning"), std::string::npos);
  EXPECT_EQ(run({"tb", "--u", "100", "--v", "100", "--nmax", "0"}).code, 2);
  EXPECT_EQ(run({"tb", "--u", "0", "--v", "100"}).code, 2);
}

TEST(Verify, PassesAndIsDeterministic) {
  const Result a = run({"verify", "--u", "5", "--v", "3", "--samples", "200"});
  EXPECT_EQ(a.code, 0) << a.out;
  EXPECT_EQ(a.out.find("FAIL"), std::string::npos);
  const Result b = run({"verify", "--u", "5", "--v", "3", "--samples", "200"});
  EXPECT_EQ(a.out, b.out);

  const Result free = run({"verify", "--u", "0", "--v", "0", "--samples", "200"});
  EXPECT_EQ(free.code, 0) << free.out;
  EXPECT_NE(free.out.find("free_particle_folding"), std::string::npos);
}

TEST(Verify, UsageError) {
  EXPECT_EQ(run({"verify", "--u", "1", "--v", "1", "--samples", "1"}).code, 2);
}
