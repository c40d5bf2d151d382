#include "conicband/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"

#include "conicband/dirac.hpp"
#include "conicband/errors.hpp"
#include "conicband/tightbinding.hpp"
#include "conicband/verify.hpp"

namespace conicband::cli {
namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string now_utc() {
  std::time_t t = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

unsigned thread_cap() {
  const char* env = std::getenv("CONICBAND_THREADS");
  if (env == nullptr) return 0;
  const long n = std::strtol(env, nullptr, 10);
  return n > 0 ? static_cast<unsigned>(n) : 0;
}

Json solver_json(const SolverConfig& c) {
  Json j;
  j["abs_tol"] = c.abs_tol;
  j["max_iter"] = c.max_iter;
  j["scan_step"] = c.scan_step;
  j["rho_max"] = c.rho_max;
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open output file " + path);
  f << text;
}

// Results go to `out` or to --out; a manifest accompanies anything that cannot embed one.
void emit(const std::string& text, const std::string& path, const RunManifest* sidecar,
          std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  write_text(path, text);
  if (sidecar != nullptr) write_text(path + ".manifest.json", sidecar->to_json().dump(2) + "\n");
}

/// Flags shared by every subcommand, plus the options bound to the manifest.
struct Common {
  double u = 0.0;
  double v = 0.0;
  SolverConfig solver;
  std::string out_path;
  std::string manifest_path;
  std::vector<CLI::Option*> computational;
  CLI::Option* u_opt = nullptr;
  CLI::Option* v_opt = nullptr;

  void add_to(CLI::App* app) {
    u_opt = app->add_option("--u", u, "Dimensionless strength u = mUa/hbar^2");
    v_opt = app->add_option("--v", v, "Dimensionless strength v = mVa/hbar^2");
    computational.push_back(u_opt);
    computational.push_back(v_opt);
    computational.push_back(app->add_option("--tol", solver.abs_tol, "Root-finder interval width")
                                ->capture_default_str());
    computational.push_back(app->add_option("--rho-max", solver.rho_max, "Search ceiling in rho")
                                ->capture_default_str());
    app->add_option("--out", out_path, "Write results to a file instead of stdout");
    app->add_option("--manifest", manifest_path, "Replay the parameters of a manifest");
  }

  // Pulls u, v and the solver from a manifest; returns its params.
  Json load_manifest(const std::string& command) {
    for (CLI::Option* opt : computational) {
      if (opt->count() > 0) {
        throw UsageError("--manifest cannot be combined with " + opt->get_name());
      }
    }
    std::ifstream f(manifest_path);
    if (!f) throw UsageError("cannot read manifest " + manifest_path);
    RunManifest m;
    try {
      m = RunManifest::from_json(Json::parse(f));
    } catch (const Json::exception& e) {
      throw UsageError(std::string("malformed manifest: ") + e.what());
    }
    if (m.command != command) {
      throw UsageError("manifest is for '" + m.command + "', not '" + command + "'");
    }
    u = m.u;
    v = m.v;
    solver = m.solver;
    return m.params;
  }

  RunManifest manifest(const std::string& command, Json params) const {
    RunManifest m;
    m.command = command;
    m.u = u;
    m.v = v;
    m.solver = solver;
    m.params = std::move(params);
    m.timestamp = now_utc();
    return m;
  }

  Lattice lattice() const {
    if (manifest_path.empty() && (u_opt->count() == 0 || v_opt->count() == 0)) {
      throw UsageError("--u and --v are required");
    }
    try {
      solver.validate();
      return Lattice(u, v);
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
  }
};

Json point_json(const BandPoint& p) {
  Json j;
  j["kappa"] = p.kappa;
  j["rho"] = p.rho;
  j["energy"] = p.energy;
  return j;
}

struct BandsCmd {
  Common common;
  int n_bands = 4;
  int n_kappa = 201;
  std::string format = "csv";
  std::vector<CLI::Option*> own;

  void add_to(CLI::App* app) {
    common.add_to(app);
    own.push_back(app->add_option("--bands", n_bands, "Number of bands")->capture_default_str());
    own.push_back(app->add_option("--kpoints", n_kappa, "Points on the kappa grid")
                      ->capture_default_str());
    own.push_back(app->add_option("--format", format, "csv or json")
                      ->check(CLI::IsMember({"csv", "json"}))
                      ->capture_default_str());
    common.computational.insert(common.computational.end(), own.begin(), own.end());
  }

  int run(std::ostream& out) {
    if (!common.manifest_path.empty()) {
      const Json p = common.load_manifest("bands");
      n_bands = p.at("bands").get<int>();
      n_kappa = p.at("kpoints").get<int>();
      format = p.at("format").get<std::string>();
    }
    if (n_bands < 1) throw UsageError("--bands must be >= 1");
    if (n_kappa < 2) throw UsageError("--kpoints must be >= 2");
    const Lattice lat = common.lattice();

    Json params;
    params["bands"] = n_bands;
    params["kpoints"] = n_kappa;
    params["format"] = format;
    const RunManifest m = common.manifest("bands", params);

    const auto bands = band_structure(lat, n_bands, n_kappa, common.solver, thread_cap());
    if (format == "json") {
      emit(bands_json(bands, m).dump(2) + "\n", common.out_path, nullptr, out);
    } else {
      emit(bands_csv(bands), common.out_path, &m, out);
    }
    return kExitOk;
  }
};

struct DiracCmd {
  Common common;
  double max_energy = 200.0;
  double fit_window = 1e-2;

  void add_to(CLI::App* app) {
    common.add_to(app);
    common.computational.push_back(
        app->add_option("--max-energy", max_energy, "Energy ceiling for candidates")
            ->capture_default_str());
    common.computational.push_back(
        app->add_option("--fit-window", fit_window, "Largest kappa offset used in the cone fit")
            ->capture_default_str());
  }

  int run(std::ostream& out) {
    if (!common.manifest_path.empty()) {
      const Json p = common.load_manifest("dirac");
      max_energy = p.at("max_energy").get<double>();
      fit_window = p.at("fit_window").get<double>();
    }
    const Lattice lat = common.lattice();
    FitWindow window;
    if (!(max_energy > 0.0)) throw UsageError("--max-energy must be > 0");
    if (!(fit_window > window.dk_min) || !(fit_window <= kHalfPi)) {
      throw UsageError("--fit-window must lie in (1e-4, pi/2]");
    }
    window.dk_max = fit_window;
    const double rho_max = std::sqrt(max_energy);
    if (rho_max + std::numbers::pi > common.solver.rho_max) {
      throw UsageError("--rho-max must exceed sqrt(max-energy) + pi");
    }

    Json params;
    params["max_energy"] = max_energy;
    params["fit_window"] = fit_window;
    const RunManifest m = common.manifest("dirac", params);

    const DiracAnalysis a = analyze_dirac_points(lat, rho_max, common.solver, window);
    Json list = Json::array();
    for (std::size_t i = 0; i < a.points.size(); ++i) {
      const DiracPoint& dp = a.points[i];
      // Equal strengths give each zero twice; report it once.
      if (lat.symmetric() && dp.family == Family::kV) continue;
      Json j;
      j["kappa_r"] = dp.kappa_r;
      j["rho_s"] = dp.rho_s;
      j["family"] = lat.symmetric() ? "uv" : family_name(dp.family);
      j["energy"] = dp.energy;
      j["slope_analytic"] = dp.slope_analytic;
      j["slope_fitted"] = dp.slope_fitted ? Json(*dp.slope_fitted) : Json(nullptr);
      j["gap"] = dp.gap;
      j["conical"] = static_cast<bool>(a.conical[i]);
      if (!dp.slope_fitted) j["reason"] = a.fit_notes[i];
      list.push_back(std::move(j));
    }
    emit(list.dump(2) + "\n", common.out_path, &m, out);
    return kExitOk;
  }
};

struct TbCmd {
  Common common;
  int n_max = 5;

  void add_to(CLI::App* app) {
    common.add_to(app);
    common.computational.push_back(
        app->add_option("--nmax", n_max, "Highest level index")->capture_default_str());
  }

  int run(std::ostream& out, std::ostream& err) {
    if (!common.manifest_path.empty()) {
      n_max = common.load_manifest("tb").at("nmax").get<int>();
    }
    if (n_max < 1) throw UsageError("--nmax must be >= 1");
    const Lattice lat = common.lattice();
    if (!(lat.u() > 0.0) || !(lat.v() > 0.0)) throw UsageError("tb needs --u and --v > 0");
    if (n_max * std::numbers::pi > common.solver.rho_max) {
      throw UsageError("--nmax * pi exceeds --rho-max");
    }

    Json params;
    params["nmax"] = n_max;
    const RunManifest m = common.manifest("tb", params);

    const TBComparison cmp = tb_compare(lat, n_max, common.solver);
    if (cmp.regime_warning) {
      err << "warning: u = " << lat.u() << ", v = " << lat.v()
          << " is below the tight-binding floor " << kTightBindingFloor << "\n";
    }
    std::string csv = "n,family,rho_exact,rho_tb,rel_err,energy_exact,energy_tb,delta_n\n";
    for (const TBLevel& lv : cmp.levels) {
      csv += std::to_string(lv.n) + "," + family_name(lv.family) + "," +
             format_double(lv.rho_exact) + "," + format_double(lv.rho_tb) + "," +
             format_double(lv.rel_err) + "," + format_double(lv.energy_exact) + "," +
             format_double(lv.energy_tb) + "," + format_double(lv.delta_n) + "\n";
    }
    emit(csv, common.out_path, &m, out);
    return kExitOk;
  }
};

struct VerifyCmd {
  Common common;
  int samples = 1000;
  std::uint64_t seed = 42;

  void add_to(CLI::App* app) {
    common.add_to(app);
    common.computational.push_back(
        app->add_option("--samples", samples, "Random samples per check")->capture_default_str());
    common.computational.push_back(
        app->add_option("--seed", seed, "Sampler seed")->capture_default_str());
  }

  int run(std::ostream& out) {
    if (!common.manifest_path.empty()) {
      const Json p = common.load_manifest("verify");
      samples = p.at("samples").get<int>();
      seed = p.at("seed").get<std::uint64_t>();
    }
    if (samples < 2) throw UsageError("--samples must be >= 2");
    const Lattice lat = common.lattice();

    const auto checks = run_verification(lat, samples, seed, common.solver);
    std::string text;
    std::size_t passed = 0;
    char line[160];
    for (const CheckResult& c : checks) {
      std::snprintf(line, sizeof line, "%-34s max_residual=%.6e tol=%.1e %s\n", c.name.c_str(),
                    c.max_residual, c.tolerance, c.pass ? "PASS" : "FAIL");
      text += line;
      passed += c.pass ? 1 : 0;
    }
    std::snprintf(line, sizeof line, "%zu/%zu checks passed\n", passed, checks.size());
    text += line;
    emit(text, common.out_path, nullptr, out);
    return passed == checks.size() ? kExitOk : kExitVerifyFailed;
  }
};

}  // namespace

Json RunManifest::to_json() const {
  Json j;
  j["command"] = command;
  j["lattice"] = {{"u", u}, {"v", v}};
  j["solver"] = solver_json(solver);
  j["params"] = params;
  j["tool_version"] = tool_version;
  j["timestamp"] = timestamp;
  return j;
}

RunManifest RunManifest::from_json(const Json& j) {
  RunManifest m;
  m.command = j.at("command").get<std::string>();
  m.u = j.at("lattice").at("u").get<double>();
  m.v = j.at("lattice").at("v").get<double>();
  const Json& s = j.at("solver");
  m.solver.abs_tol = s.at("abs_tol").get<double>();
  m.solver.max_iter = s.at("max_iter").get<int>();
  m.solver.scan_step = s.at("scan_step").get<double>();
  m.solver.rho_max = s.at("rho_max").get<double>();
  m.params = j.at("params");
  m.tool_version = j.at("tool_version").get<std::string>();
  m.timestamp = j.at("timestamp").get<std::string>();
  return m;
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string bands_csv(const std::vector<Band>& bands) {
  std::string s = "band,kappa,rho,energy\n";
  for (const Band& b : bands) {
    for (const BandPoint& p : b.points) {
      s += std::to_string(b.index) + "," + format_double(p.kappa) + "," + format_double(p.rho) +
           "," + format_double(p.energy) + "\n";
    }
  }
  return s;
}

Json bands_json(const std::vector<Band>& bands, const RunManifest& manifest) {
  Json j;
  j["manifest"] = manifest.to_json();
  Json list = Json::array();
  for (const Band& b : bands) {
    Json jb;
    jb["index"] = b.index;
    Json pts = Json::array();
    for (const BandPoint& p : b.points) pts.push_back(point_json(p));
    jb["points"] = std::move(pts);
    jb["edges"] = Json::array({b.edges.first, b.edges.second});
    list.push_back(std::move(jb));
  }
  j["bands"] = std::move(list);
  return j;
}

std::vector<Band> bands_from_json(const Json& j) {
  std::vector<Band> out;
  for (const Json& jb : j.at("bands")) {
    Band b;
    b.index = jb.at("index").get<int>();
    for (const Json& p : jb.at("points")) {
      b.points.push_back({p.at("kappa").get<double>(), p.at("rho").get<double>(),
                          p.at("energy").get<double>()});
    }
    b.edges = {jb.at("edges").at(0).get<double>(), jb.at("edges").at(1).get<double>()};
    out.push_back(std::move(b));
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Band structure and conical points of the two-strength delta lattice",
               "conicband"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  BandsCmd bands;
  DiracCmd dirac;
  TbCmd tb;
  VerifyCmd verify;
  CLI::App* s_bands = app.add_subcommand("bands", "Band structure over the Brillouin zone");
  CLI::App* s_dirac = app.add_subcommand("dirac", "Conical-point report (JSON)");
  CLI::App* s_tb = app.add_subcommand("tb", "Tight-binding comparison table (CSV)");
  CLI::App* s_verify = app.add_subcommand("verify", "Numerical verification suite");
  bands.add_to(s_bands);
  dirac.add_to(s_dirac);
  tb.add_to(s_tb);
  verify.add_to(s_verify);

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (s_bands->parsed()) return bands.run(out);
    if (s_dirac->parsed()) return dirac.run(out);
    if (s_tb->parsed()) return tb.run(out, err);
    return verify.run(out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace conicband::cli
