#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gltower/report_json.hpp"

namespace gltower::cli {

inline const std::vector<std::string> kCommands = {"chain",        "partition",     "tower", "verify-lemma",
                                                   "scan",         "finite-prop1", "finite-unfold"};

struct RunConfig {
  std::string command;
  int n1 = 0;
  int n2 = 0;
  int max_n = 14;
  std::uint32_t q = 2;
  int chi = 0;
  std::vector<std::uint64_t> seeds;
  std::string out;  // empty: stdout
  bool pretty = false;
  std::uint64_t limit = finite::EnumerationLimits{}.max_candidates;
  std::string sign = "negated";
  std::string corner;  // empty: default for the command
};

struct RunResult {
  Json json;
  int exit_code = 0;  // 0 when every assertion passed, 1 otherwise
};

/// "0..19", "3", "1,4,9" or any comma list of those. Throws DomainError.
std::vector<std::uint64_t> parse_seeds(const std::string& text);

/// Throws DomainError for an unknown command or nonpositive fields.
void validate(const RunConfig& cfg);

/// Library errors (bad pairs, size limits, construction failures) propagate.
RunResult run_command(const RunConfig& cfg);

std::string render(const Json& j, bool pretty);

}  // namespace gltower::cli
