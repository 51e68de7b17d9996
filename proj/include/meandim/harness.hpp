#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "meandim/common.hpp"

namespace meandim {

// One verified inequality row: left <relation> right within tolerance, with
// the claim text and the CSV tables both sides can be recomputed from.
struct CheckRow {
  std::string name;
  std::string claim;
  double left = 0.0;
  std::string relation;
  double right = 0.0;
  double tolerance = 0.0;
  std::string verdict;  // "pass", "fail", or "inapplicable"
  std::string left_source;
  std::string right_source;
};

struct VerificationReport {
  std::vector<CheckRow> rows;
  bool all_pass() const {
    for (const auto& row : rows) {
      if (row.verdict != "pass") return false;
    }
    return true;
  }
};

// What part of the experiment a CLI subcommand runs.  Verify runs every
// section and then evaluates the configured checks.
enum class RunScope { Dims, Rd, Codec, Verify };

struct RunOptions {
  std::string config_path;
  std::string out_dir;  // overrides the config's out_dir when nonempty
  std::optional<std::uint64_t> seed_override;
  int jobs = 1;
  RunScope scope = RunScope::Verify;
};

// Loads the config, runs the requested sections, writes the CSV artifacts,
// and (for Verify) evaluates the configured checks into the report.
// Throws config_error for invalid configs and propagates cap_exceeded with
// the offending window length and depth in the message.
VerificationReport run_experiment(const RunOptions& options);

struct CheckInfo {
  std::string id;
  std::string claim;
  std::string detail;
};

// All check identifiers the harness understands, with their claim text.
const std::vector<CheckInfo>& check_registry();

// Bundled model identifiers constructible from a config's model section.
std::vector<std::string> bundled_model_ids();

// Human-readable description of one check; throws config_error if unknown.
std::string describe_check(const std::string& id);

}  // namespace meandim
