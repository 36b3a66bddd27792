#pragma once

// Run configuration for the command-line experiments: a flat key = value file
// with [section] headers, overridable key by key (`--set detector.s=1.5`).
//
//   [grid]     dim, points, half_width
//   [signal]   name, plus any corpus parameter (x0, k, a, w)
//   [window]   name, b
//   [detector] method (wavepacket|cone|both), s, x0, xi0, lambda_ratio,
//              nyquist_fraction, k_halfwidth, v_halfwidth, v_points, margin,
//              window_len, z_pitch, condition (2|3), cutoff_width, cone_halfangle
//   [solver]   p, q, free, t0, steps, store_every, scheme (strang|lie),
//              substep (auto|exact|rk4)
//   [theorem]  r, s, tile_threshold
//   [slice]    enabled, lambda, x_halfwidth, x_points, xi_max, xi_points
//   [suite]    checks (comma list of check groups, "all", or empty)
//   [output]   dir
//   [run]      seed

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wpk/corpus.hpp"
#include "wpk/grid_field.hpp"
#include "wpk/io.hpp"
#include "wpk/microlocal.hpp"
#include "wpk/schrodinger.hpp"
#include "wpk/windows.hpp"

namespace wpk {

struct SliceSpec {
  bool enabled = false;
  double lambda = 1.0;
  double x_halfwidth = 4.0;
  int x_points = 129;
  double xi_max = 8.0;
  int xi_points = 129;
};

struct RunConfig {
  int dim = 1;
  std::size_t points = 0;  // 0: the command's default
  double half_width = 20.0;

  std::string signal = "gaussian";
  SignalParams signal_params;

  std::string window = "gaussian";
  double b = 0.25;

  std::string method = "wavepacket";
  PhasePoint point{0.0, 1.0};
  CriterionParams detector;
  double cutoff_width = 1.0;
  double cone_halfangle = 0.5;

  NonlinearityPowers powers{2, 1};
  bool free_flow = false;
  double t0 = 0.5;
  int steps = 256;
  int store_every = 0;  // 0: only the endpoints
  StepScheme scheme = StepScheme::Strang;
  Substep substep = Substep::Auto;

  double r = 0.9;
  double theorem_s = 0.75;
  double tile_threshold = 1e-8;

  SliceSpec slice;

  bool all_checks = true;
  std::vector<std::string> checks;

  std::filesystem::path output_dir = "wpk_out";
  std::uint64_t seed = 1;

  /// Unknown keys and malformed values raise ParameterError.
  static RunConfig from_kv(const KeyValues& kv);
  KeyValues to_kv() const;

  /// Range checks and corpus-name resolution; ParameterError on failure.
  void validate() const;

  Grid grid(std::size_t default_points) const;
  Field make_signal_field(const Grid& grid) const;
  std::optional<NonlinearityPowers> nonlinearity() const;
  Theorem2Config theorem_config() const;
};

/// `key=value` -> (key, value); ParameterError if there is no '='.
std::pair<std::string, std::string> split_assignment(const std::string& text);

}  // namespace wpk
