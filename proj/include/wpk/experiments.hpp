#pragma once

// Drivers behind the command-line subcommands. Each computes first and then
// writes its artifacts into config.output_dir from the calling thread, in a
// fixed order, followed by manifest.txt (config, version, tolerances).

#include <filesystem>
#include <string>
#include <vector>

#include "wpk/config.hpp"
#include "wpk/error.hpp"
#include "wpk/microlocal.hpp"
#include "wpk/schrodinger.hpp"
#include "wpk/suites.hpp"

namespace wpk {

const char* version_string();

/// Exit-code contract of the command-line tool.
namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int check_failed = 1;
inline constexpr int inconclusive = 2;
inline constexpr int usage = 64;
inline constexpr int missing_input = 66;
inline constexpr int numerical = 70;
}  // namespace exit_code

int exit_code_for(ErrorKind kind);

/// OpenMP worker count for subsequent parallel regions (n >= 1).
void set_worker_count(int n);

void write_manifest(const std::filesystem::path& dir, const std::string& command,
                    const RunConfig& config);

SuiteReport run_verify_identities(const RunConfig& config);

struct DetectResult {
  std::vector<CriterionCurve> curves;  // wavepacket first when both run
  Verdict verdict = Verdict::Inconclusive;  // verdict of the first curve
};
/// Default grid 16384 points. Writes <method>.csv and <method>.summary.txt,
/// and slice.csv when the slice is enabled.
DetectResult run_detect(const RunConfig& config);

/// Condition (2) or (3) per detector.condition at level detector.s.
/// Writes transported.csv, transported.summary.txt, transported_z.csv.
CriterionCurve run_transported(const RunConfig& config);

struct SolveResult {
  Trajectory trajectory;
  ConservationReport conservation;
};
/// Default grid 1024 points. Writes trajectory/ and summary.txt.
SolveResult run_solve(const RunConfig& config);

/// Default grid 8192 points. Writes condition2/3 curves (or their skip
/// reasons), one curve per conclusion tile under conclusions/, the
/// trajectory, report.txt (key = value) and table.txt.
Theorem2Report run_theorem2(const RunConfig& config);
void print_theorem2_table(std::ostream& os, const Theorem2Report& report);

/// Converts stored artifacts to gnuplot-ready files in out_dir:
///   curve CSV  -> <stem>.loglog.dat (log10 lambda, log10 g) and
///                 <stem>.fit.dat (top-decade least-squares line);
///   slice CSV  -> <stem>.matrix.dat (x xi |W| blocks).
/// Never recomputes a transform. Returns the files written; IoError for
/// missing or unrecognized inputs.
std::vector<std::filesystem::path> run_plotdata(const std::vector<std::filesystem::path>& inputs,
                                                const std::filesystem::path& out_dir);

}  // namespace wpk
