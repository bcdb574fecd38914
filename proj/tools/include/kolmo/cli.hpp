#pragma once

// The `kolmo` command line. Parsing and dispatch live here so that tests can
// drive the tool in-process.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kolmo::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kNumericalFailure = 2,
  kViolation = 3,
};

struct Invocation {
  std::string subcommand;  // validate, gamma, criterion, solve, probe, barrier, equivalence
  std::string config;
  std::string out;  // empty: stdout
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::string format = "json";
  // gamma only.
  std::vector<double> x;
  std::optional<double> t;
};

const std::vector<std::string>& subcommands();

// Runs the subcommand and writes the payload to inv.out (atomically) or to
// out. Diagnostics and the manifest echo go to err.
int dispatch(const Invocation& inv, std::ostream& out, std::ostream& err);

// argv front end; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

std::uint64_t fnv1a64(std::string_view bytes);

// Writes through a sibling temporary file and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace kolmo::cli
