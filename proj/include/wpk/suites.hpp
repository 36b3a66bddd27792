#pragma once

// The identity-verification suite: each check measures one identity on the
// configured grid and compares it with a tolerance.

#include <iosfwd>
#include <string>
#include <vector>

#include "wpk/config.hpp"

namespace wpk {

enum class CheckStatus { Pass, Fail, Skip };
enum class SuiteStatus { Pass, Fail, Incomplete, Errored };
const char* to_string(CheckStatus s);
const char* to_string(SuiteStatus s);

struct CheckRecord {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  CheckStatus status = CheckStatus::Skip;
  std::string note;  // skip reason or context
};

struct SuiteReport {
  std::string name;
  std::vector<CheckRecord> records;
  // Pass iff every record passes (an empty suite passes); any failure is
  // Fail; skips without failures are Incomplete; an infrastructure error
  // (not a toolkit Error) is Errored.
  SuiteStatus status = SuiteStatus::Pass;
  std::string error;
  double wall_seconds = 0.0;

  void finalize();
};

/// Check groups in run order.
const std::vector<std::string>& identity_check_groups();

/// Runs the selected groups (all of them when config.all_checks). Errors of
/// the toolkit's resolution/range kinds turn into skipped records.
SuiteReport verify_identities(const RunConfig& config);

/// key = value: suite, status, wall_seconds, then check.<name>.{value,tolerance,status,note}.
void write_suite_report(std::ostream& os, const SuiteReport& report);
/// Aligned human-readable table.
void print_suite_table(std::ostream& os, const SuiteReport& report);

}  // namespace wpk
