#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace apermute::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kBadInput = 2,
  kEmptyClass = 3,
  kIdentityViolation = 4,
};

/// Parsed command line. Subcommand fields not used by the selected command
/// keep their defaults.
struct RunConfig {
  std::string command;  // count | dist | sample | moments | verify
  std::string report;   // verify: poisson | ratio | scaling | egf-ratio
  std::string set_rule;
  std::uint64_t n = 0;
  bool has_n = false;
  std::vector<std::uint64_t> n_list;
  std::vector<std::uint64_t> lengths;
  std::uint64_t length = 0;
  std::uint64_t order = 1;
  std::uint64_t samples = 1;
  std::uint64_t seed = 0;
  bool aggregate = false;
  bool full_table = false;
  std::string method;
  std::string format = "json";
  std::string cache_dir = ".apermute-cache";
  bool use_cache = true;
};

/// Runs one invocation. `args` excludes the program name. Output is written
/// to `out` only when the command succeeds; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace apermute::cli
