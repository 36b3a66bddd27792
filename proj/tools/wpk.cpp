// wpk: command-line front end for the wave packet toolkit.
//
//   wpk verify-identities [-c cfg] [--set k=v]...
//   wpk detect            [-c cfg] [--set k=v]...
//   wpk transported       [-c cfg] [--set k=v]...
//   wpk solve             [-c cfg] [--set k=v]...
//   wpk theorem2          [-c cfg] [--set k=v]...
//   wpk plotdata FILE... [-o dir]
//
// WPK_OUTPUT_DIR overrides output.dir; WPK_WORKERS sets the thread count.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wpk/experiments.hpp"

namespace fs = std::filesystem;
using namespace wpk;

namespace {

struct Common {
  std::string config_file;
  std::vector<std::string> overrides;
  std::string output;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("-c,--config", c.config_file, "key = value configuration file");
  cmd->add_option("--set", c.overrides, "override one key, e.g. --set detector.s=1.5")->take_all();
  cmd->add_option("-o,--output", c.output, "output directory (overrides output.dir)");
}

// Precedence: file < --set < WPK_OUTPUT_DIR < --output.
RunConfig load_config(const Common& c) {
  KeyValues kv;
  if (!c.config_file.empty()) {
    if (!fs::is_regular_file(c.config_file)) throw IoError("missing config file " + c.config_file);
    try {
      kv = KeyValues::load(c.config_file);
    } catch (const IoError& e) {
      throw ParameterError(std::string("config: ") + e.what());
    }
  }
  for (const auto& o : c.overrides) {
    const auto [k, v] = split_assignment(o);
    kv.set(k, v);
  }
  if (const char* env = std::getenv("WPK_OUTPUT_DIR"); env && *env) kv.set("output.dir", std::string(env));
  if (!c.output.empty()) kv.set("output.dir", c.output);
  return RunConfig::from_kv(kv);
}

void print_curve(const CriterionCurve& c) {
  std::printf("%-48s %-12s slope %+8.3f  lambda_max %8.2f  partial %.4e\n", c.label.c_str(), to_string(c.verdict),
              c.tail_slope, c.lambdas.empty() ? 0.0 : c.lambdas.back(), c.partial_integral);
  for (const auto& d : c.diagnostics) std::printf("    note: %s\n", d.c_str());
}

int verdict_exit(Verdict v) { return v == Verdict::Inconclusive ? exit_code::inconclusive : exit_code::ok; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wave packet transform and H^s wave-front-set experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version_string()));

  Common verify_opts, detect_opts, transported_opts, solve_opts, theorem_opts;
  auto* verify = app.add_subcommand("verify-identities", "run the identity-verification suite");
  add_common(verify, verify_opts);
  auto* detect = app.add_subcommand("detect", "static wave-front detection at (x0, xi0)");
  add_common(detect, detect_opts);
  auto* transported = app.add_subcommand("transported", "transported criterion, condition (2) or (3)");
  add_common(transported, transported_opts);
  auto* solve = app.add_subcommand("solve", "integrate the nonlinear Schrodinger equation");
  add_common(solve, solve_opts);
  auto* theorem = app.add_subcommand("theorem2", "hypotheses, solve and conclusion tiles end to end");
  add_common(theorem, theorem_opts);
  std::vector<std::string> plot_inputs;
  std::string plot_out = ".";
  auto* plot = app.add_subcommand("plotdata", "convert stored curves and slices to gnuplot data");
  plot->add_option("inputs", plot_inputs, "curve or slice CSV files")->required();
  plot->add_option("-o,--output", plot_out, "directory for the .dat files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : exit_code::usage;
  }

  try {
    if (const char* env = std::getenv("WPK_WORKERS"); env && *env) {
      char* end = nullptr;
      const long n = std::strtol(env, &end, 10);
      if (*end != '\0' || n < 1) throw ParameterError(std::string("WPK_WORKERS must be a positive integer, got '") + env + "'");
      set_worker_count(static_cast<int>(n));
    }

    if (*verify) {
      const RunConfig cfg = load_config(verify_opts);
      const SuiteReport r = run_verify_identities(cfg);
      print_suite_table(std::cout, r);
      switch (r.status) {
        case SuiteStatus::Pass: return exit_code::ok;
        case SuiteStatus::Fail: return exit_code::check_failed;
        case SuiteStatus::Incomplete: return exit_code::inconclusive;
        case SuiteStatus::Errored: return exit_code::numerical;
      }
    }
    if (*detect) {
      const RunConfig cfg = load_config(detect_opts);
      const DetectResult r = run_detect(cfg);
      for (const auto& c : r.curves) print_curve(c);
      return verdict_exit(r.verdict);
    }
    if (*transported) {
      const RunConfig cfg = load_config(transported_opts);
      const CriterionCurve c = run_transported(cfg);
      print_curve(c);
      return verdict_exit(c.verdict);
    }
    if (*solve) {
      const RunConfig cfg = load_config(solve_opts);
      const SolveResult r = run_solve(cfg);
      std::printf("t = %g after %d steps: mass drift %.3e", r.trajectory.times.back(), r.trajectory.n_steps,
                  r.conservation.mass_drift);
      if (r.conservation.has_energy) std::printf(", energy drift %.3e", r.conservation.energy_drift);
      std::printf("\n");
      if (r.trajectory.blowup) {
        std::fprintf(stderr, "wpk: solver stopped: %s\n", r.trajectory.blowup->c_str());
        return exit_code::numerical;
      }
      return exit_code::ok;
    }
    if (*theorem) {
      const RunConfig cfg = load_config(theorem_opts);
      const double n = 1.0;
      const double lhs = 2 * cfg.r + n - 1 - 4 * cfg.theorem_s + cfg.b * (4 * cfg.theorem_s + n);
      std::fprintf(stderr, "wpk: b inequality 2r + n - 1 - 4s + b(4s + n) = %.4f (%s -1) at r = %g, s = %g, b = %g\n",
                   lhs, lhs < -1 ? "<" : ">=", cfg.r, cfg.theorem_s, cfg.b);
      const Theorem2Report r = run_theorem2(cfg);
      print_theorem2_table(std::cout, r);
      return r.implication_held ? exit_code::ok : exit_code::check_failed;
    }
    if (*plot) {
      std::vector<fs::path> inputs(plot_inputs.begin(), plot_inputs.end());
      for (const auto& p : run_plotdata(inputs, plot_out)) std::printf("%s\n", p.string().c_str());
      return exit_code::ok;
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "wpk: %s error: %s\n", to_string(e.kind()), e.what());
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "wpk: internal error: %s\n", e.what());
    return exit_code::numerical;
  }
  return exit_code::usage;
}
