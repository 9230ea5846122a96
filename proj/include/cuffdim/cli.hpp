#pragma once

// Command front end: run configuration, the JSON-lines result ledger and the
// single-line JSON summaries printed by every command.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "cuffdim/pants.hpp"

namespace cuffdim {

using Json = nlohmann::ordered_json;

const char* version_string();

/// Compact JSON with every floating-point number written with 17 significant
/// digits; non-finite numbers become null.
std::string json_line(const Json& value);

/// Rounds to a multiple of 1e-9 so that keys do not depend on the last bits.
double canonical_parameter(double x);

struct RunConfig {
  std::string command;
  CuffLengths cuffs{2.0, 2.0, 2.0};
  double tol = 1e-4;
  int depth = 8;
  int depth_lo = 2;
  int depth_hi = 6;
  std::string a_range;  // "x" or "lo:hi:n"
  std::string b_range;
  std::string c_range;
  double target = 0.5;
  std::optional<double> locus_a;
  std::optional<double> locus_b;
  int grid = 256;
  std::string family = "directions";
  std::optional<double> separation;
  std::string fixture = "omega";
  bool restrict_pairs = true;
  std::string xi;
  std::string eta;
  std::string word;
  int length = 30;
  int realize_depth = 12;
  std::uint64_t seed = 1;
  std::size_t count = 1'000'000;
  std::optional<double> s;
  int k_min = 3;
  int k_max = 10;
  std::string out;
  bool use_ledger = true;
};

/// Validates cfg against the module preconditions; throws Error.
void validate_config(const RunConfig& cfg);

/// Append-only JSON-lines cache. Each line is
///   {"kind", "key", "depth", "results", "residuals", "version"}.
/// Among entries with equal kind and key the highest depth wins. Unparsable
/// lines are skipped with a warning on the given stream.
class Ledger {
 public:
  explicit Ledger(std::string path, std::ostream* warnings = nullptr);

  /// Path from CUFFDIM_LEDGER, or "cuffdim_ledger.jsonl" in the working directory.
  static std::string default_path();

  const std::string& path() const { return path_; }
  std::optional<Json> lookup(const std::string& kind, const Json& key) const;
  /// Appends one line under an exclusive advisory lock.
  void append(const std::string& kind, const Json& key, int depth, const Json& results, const Json& residuals) const;

 private:
  std::string path_;
  std::ostream* warnings_;
};

/// Runs one command, printing the JSON summary on out and errors as JSON on
/// err. Returns the process exit status: 0 on success, 1 for invalid input or
/// a failed computation, 3 when a validator in the run failed.
int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace cuffdim
