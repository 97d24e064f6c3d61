#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace gtbounds {

/// Invalid flags or config values; the front end maps it to exit status 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string command;  // threshold | bound | simulate | sweep | verify
  std::string channel = "noiseless";
  long long p = 0;
  int k = 0;
  int n = -1;
  std::string n_grid;  // "lo:hi", "lo:hi:step" or "n1,n2,..."
  double eta = 0.0;
  double c0 = 1.0;
  std::optional<double> delta;   // Chebyshev slack; unset sweeps a grid
  std::optional<double> delta1;  // unset uses 1/sqrt(C(p, k))
  std::string ensemble;          // empty: iid at the maximizer of I_s*
  std::string mode = "ensemble"; // ensemble | fixed
  std::string matrix;            // matrix file for bound / simulate
  long long trials = 0;
  std::string seed;              // decimal integer or "auto"
  int workers = 1;
  bool mixture = false;          // threshold: also search mixture profiles
  std::string output;            // empty: standard output
  std::string format = "json";   // json | csv
};

nlohmann::json to_json(const RunConfig& config);

/// Reads a config from JSON. Accepts a bare config object, a JSON output document
/// (uses its "config" member) or a CSV output (uses its "# config=" line).
RunConfig load_run_config(const std::filesystem::path& path);

/// Applies the keys present in `patch` on top of `config`.
void merge_run_config(RunConfig& config, const nlohmann::json& patch);

/// Checks required fields and numeric ranges for the configured command.
void validate(const RunConfig& config);

/// Executes the command and writes the artifact. Returns 0 on success, 1 when a module
/// reports an error or verification finds violations, 2 on usage errors.
/// `sources` (config file path and flags given) is embedded next to the config when present.
int run(const RunConfig& config, std::ostream& out, std::ostream& err,
        const nlohmann::json& sources = nullptr);

/// Parses argv (subcommand plus flags, optional --config file) and calls run().
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

std::vector<int> parse_n_grid(const std::string& text);

}  // namespace gtbounds
