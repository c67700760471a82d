#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cbsfs/model.hpp"

namespace cbsfs::cli {

enum class Format { Csv, Json };

struct RunConfig {
  ModelParams params;
  std::uint64_t seed = 1;
  std::optional<std::size_t> reps;  ///< unset: each command picks its default
  int n = 10;
  std::optional<double> z0;
  std::string out;  ///< empty: standard output
  Format format = Format::Csv;
  unsigned workers = 1;

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
  std::size_t reps_or(std::size_t fallback) const { return reps.value_or(fallback); }
};

/// "# key=value" lines describing everything that determines the output.
/// The worker count is left out: it never changes the data.
std::string config_header(const std::string& command, const RunConfig& config);

/// Exit codes.
inline constexpr int exit_ok = 0;
inline constexpr int exit_check_failed = 1;
inline constexpr int exit_usage = 2;

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<std::string> suite_names();

/// Runs one verification suite ("all" runs every suite). Throws
/// std::out_of_range for an unknown name.
std::vector<CheckResult> run_suite(const std::string& name, const RunConfig& config);

/// Shortest round-trip decimal form.
std::string fmt(double v);

}  // namespace cbsfs::cli
