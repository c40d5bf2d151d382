#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "conicband/bands.hpp"
#include "conicband/rootfind.hpp"

namespace conicband::cli {

inline constexpr const char* kToolVersion = "1.0.0";

/// Process exit codes; a stable contract.
enum ExitCode : int {
  kExitOk = 0,
  kExitVerifyFailed = 1,
  kExitUsage = 2,
  kExitNumerical = 3,
};

using Json = nlohmann::ordered_json;

/// Everything needed to reproduce one command's output.
struct RunManifest {
  std::string command;
  double u = 0.0;
  double v = 0.0;
  SolverConfig solver;
  Json params = Json::object();  // command-specific flags
  std::string tool_version = kToolVersion;
  std::string timestamp;  // ISO-8601 UTC; SOURCE_DATE_EPOCH pins it

  Json to_json() const;
  static RunManifest from_json(const Json& j);
};

/// 17 significant digits: parses back to the same double.
std::string format_double(double x);

/// `band,kappa,rho,energy` rows, band-major, LF line endings.
std::string bands_csv(const std::vector<Band>& bands);

Json bands_json(const std::vector<Band>& bands, const RunManifest& manifest);
std::vector<Band> bands_from_json(const Json& j);

/// Parses argv (argv[0] is the program name) and runs a subcommand, writing results to
/// `out` (unless --out redirects them) and diagnostics to `err`. Returns an ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace conicband::cli
