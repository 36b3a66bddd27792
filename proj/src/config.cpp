#include "wpk/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "wpk/error.hpp"
#include "wpk/window.hpp"

namespace wpk {
namespace {

const std::set<std::string> kKnown = {
    "grid.dim", "grid.points", "grid.half_width",
    "signal.name",
    "window.name", "window.b",
    "detector.method", "detector.s", "detector.x0", "detector.xi0", "detector.lambda_ratio",
    "detector.nyquist_fraction", "detector.k_halfwidth", "detector.v_halfwidth",
    "detector.v_points", "detector.margin", "detector.window_len", "detector.z_pitch",
    "detector.condition", "detector.cutoff_width", "detector.cone_halfangle",
    "solver.p", "solver.q", "solver.free", "solver.t0", "solver.steps", "solver.store_every",
    "solver.scheme", "solver.substep",
    "theorem.r", "theorem.s", "theorem.tile_threshold",
    "slice.enabled", "slice.lambda", "slice.x_halfwidth", "slice.x_points", "slice.xi_max",
    "slice.xi_points",
    "suite.checks",
    "output.dir",
    "run.seed",
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

StepScheme parse_scheme(const std::string& s) {
  const auto v = lower(s);
  if (v == "strang") return StepScheme::Strang;
  if (v == "lie") return StepScheme::Lie;
  throw ParameterError("solver.scheme must be strang or lie, got '" + s + "'");
}

Substep parse_substep(const std::string& s) {
  const auto v = lower(s);
  if (v == "auto") return Substep::Auto;
  if (v == "exact" || v == "exactphase") return Substep::ExactPhase;
  if (v == "rk4") return Substep::RK4;
  throw ParameterError("solver.substep must be auto, exact or rk4, got '" + s + "'");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto a = item.find_first_not_of(" \t");
    if (a == std::string::npos) continue;
    const auto b = item.find_last_not_of(" \t");
    out.push_back(item.substr(a, b - a + 1));
  }
  return out;
}

}  // namespace

std::pair<std::string, std::string> split_assignment(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ParameterError("expected key=value, got '" + text + "'");
  }
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return std::string();
    return s.substr(a, s.find_last_not_of(" \t") - a + 1);
  };
  return {trim(text.substr(0, eq)), trim(text.substr(eq + 1))};
}

RunConfig RunConfig::from_kv(const KeyValues& kv) {
  RunConfig c;
  for (const auto& [key, value] : kv.entries()) {
    if (kKnown.count(key)) continue;
    if (key.rfind("signal.", 0) == 0) {
      const std::string name = key.substr(7);
      try {
        c.signal_params[name] = std::stod(value);
      } catch (const std::exception&) {
        throw ParameterError("signal parameter '" + name + "' is not a number: '" + value + "'");
      }
      continue;
    }
    throw ParameterError("unknown configuration key '" + key + "'");
  }
  try {
    c.dim = static_cast<int>(kv.get_int_or("grid.dim", c.dim));
    c.points = static_cast<std::size_t>(kv.get_int_or("grid.points", 0));
    c.half_width = kv.get_double_or("grid.half_width", c.half_width);

    c.signal = kv.get_or("signal.name", c.signal);
    c.window = kv.get_or("window.name", c.window);
    c.b = kv.get_double_or("window.b", c.b);

    c.method = lower(kv.get_or("detector.method", c.method));
    c.detector.s = kv.get_double_or("detector.s", c.detector.s);
    c.point.x0 = kv.get_double_or("detector.x0", c.point.x0);
    c.point.xi0 = kv.get_double_or("detector.xi0", c.point.xi0);
    c.detector.lambda_ratio = kv.get_double_or("detector.lambda_ratio", c.detector.lambda_ratio);
    c.detector.nyquist_fraction = kv.get_double_or("detector.nyquist_fraction", c.detector.nyquist_fraction);
    c.detector.k_halfwidth = kv.get_double_or("detector.k_halfwidth", c.detector.k_halfwidth);
    c.detector.v_halfwidth = kv.get_double_or("detector.v_halfwidth", c.detector.v_halfwidth);
    c.detector.v_points = static_cast<int>(kv.get_int_or("detector.v_points", c.detector.v_points));
    c.detector.margin = kv.get_double_or("detector.margin", c.detector.margin);
    c.detector.window_len = static_cast<int>(kv.get_int_or("detector.window_len", c.detector.window_len));
    c.detector.z_pitch = kv.get_double_or("detector.z_pitch", c.detector.z_pitch);
    const auto cond = kv.get_int_or("detector.condition", 2);
    if (cond != 2 && cond != 3) throw ParameterError("detector.condition must be 2 or 3");
    c.detector.direction_sign = cond == 2 ? +1 : -1;
    c.cutoff_width = kv.get_double_or("detector.cutoff_width", c.cutoff_width);
    c.cone_halfangle = kv.get_double_or("detector.cone_halfangle", c.cone_halfangle);

    c.powers.p = static_cast<int>(kv.get_int_or("solver.p", c.powers.p));
    c.powers.q = static_cast<int>(kv.get_int_or("solver.q", c.powers.q));
    c.free_flow = kv.get_bool_or("solver.free", c.free_flow);
    c.t0 = kv.get_double_or("solver.t0", c.t0);
    c.steps = static_cast<int>(kv.get_int_or("solver.steps", c.steps));
    c.store_every = static_cast<int>(kv.get_int_or("solver.store_every", c.store_every));
    if (kv.has("solver.scheme")) c.scheme = parse_scheme(kv.get("solver.scheme"));
    if (kv.has("solver.substep")) c.substep = parse_substep(kv.get("solver.substep"));

    c.r = kv.get_double_or("theorem.r", c.r);
    c.theorem_s = kv.get_double_or("theorem.s", c.theorem_s);
    c.tile_threshold = kv.get_double_or("theorem.tile_threshold", c.tile_threshold);

    c.slice.enabled = kv.get_bool_or("slice.enabled", c.slice.enabled);
    c.slice.lambda = kv.get_double_or("slice.lambda", c.slice.lambda);
    c.slice.x_halfwidth = kv.get_double_or("slice.x_halfwidth", c.slice.x_halfwidth);
    c.slice.x_points = static_cast<int>(kv.get_int_or("slice.x_points", c.slice.x_points));
    c.slice.xi_max = kv.get_double_or("slice.xi_max", c.slice.xi_max);
    c.slice.xi_points = static_cast<int>(kv.get_int_or("slice.xi_points", c.slice.xi_points));

    if (kv.has("suite.checks")) {
      const std::string v = kv.get("suite.checks");
      c.all_checks = lower(v) == "all";
      if (!c.all_checks) c.checks = split_list(v);
    }
    c.output_dir = kv.get_or("output.dir", c.output_dir.string());
    c.seed = static_cast<std::uint64_t>(kv.get_int_or("run.seed", static_cast<long long>(c.seed)));
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw ParameterError(std::string("malformed configuration value: ") + e.what());
  }
  c.validate();
  return c;
}

KeyValues RunConfig::to_kv() const {
  KeyValues kv;
  kv.set("grid.dim", dim);
  kv.set("grid.points", static_cast<long long>(points));
  kv.set("grid.half_width", half_width);
  kv.set("signal.name", signal);
  for (const auto& [k, v] : signal_params) kv.set("signal." + k, v);
  kv.set("window.name", window);
  kv.set("window.b", b);
  kv.set("detector.method", method);
  kv.set("detector.s", detector.s);
  kv.set("detector.x0", point.x0);
  kv.set("detector.xi0", point.xi0);
  kv.set("detector.lambda_ratio", detector.lambda_ratio);
  kv.set("detector.nyquist_fraction", detector.nyquist_fraction);
  kv.set("detector.k_halfwidth", detector.k_halfwidth);
  kv.set("detector.v_halfwidth", detector.v_halfwidth);
  kv.set("detector.v_points", detector.v_points);
  kv.set("detector.margin", detector.margin);
  kv.set("detector.window_len", detector.window_len);
  kv.set("detector.z_pitch", detector.z_pitch);
  kv.set("detector.condition", detector.direction_sign > 0 ? 2 : 3);
  kv.set("detector.cutoff_width", cutoff_width);
  kv.set("detector.cone_halfangle", cone_halfangle);
  kv.set("solver.p", powers.p);
  kv.set("solver.q", powers.q);
  kv.set("solver.free", free_flow);
  kv.set("solver.t0", t0);
  kv.set("solver.steps", steps);
  kv.set("solver.store_every", store_every);
  kv.set("solver.scheme", lower(to_string(scheme)));
  kv.set("solver.substep", lower(to_string(substep)));
  kv.set("theorem.r", r);
  kv.set("theorem.s", theorem_s);
  kv.set("theorem.tile_threshold", tile_threshold);
  kv.set("slice.enabled", slice.enabled);
  kv.set("slice.lambda", slice.lambda);
  kv.set("slice.x_halfwidth", slice.x_halfwidth);
  kv.set("slice.x_points", slice.x_points);
  kv.set("slice.xi_max", slice.xi_max);
  kv.set("slice.xi_points", slice.xi_points);
  std::string list;
  for (const auto& c : checks) list += (list.empty() ? "" : ",") + c;
  kv.set("suite.checks", all_checks ? std::string("all") : list);
  kv.set("output.dir", output_dir.string());
  kv.set("run.seed", static_cast<long long>(seed));
  return kv;
}

void RunConfig::validate() const {
  if (dim != 1 && dim != 2) throw ParameterError("grid.dim must be 1 or 2");
  if (points != 0 && (points < 8 || (points & (points - 1)) != 0)) {
    throw ParameterError("grid.points must be a power of two >= 8");
  }
  if (!(half_width > 0.0) || !std::isfinite(half_width)) throw ParameterError("grid.half_width must be positive");
  const CorpusEntry& entry = corpus_entry(signal);
  for (const auto& [k, v] : signal_params) {
    if (!entry.defaults.count(k)) throw ParameterError("signal '" + signal + "' has no parameter '" + k + "'");
    if (!std::isfinite(v)) throw ParameterError("signal parameter '" + k + "' must be finite");
  }
  (void)window_shape(window);
  WindowSpec{b, 1.0, 0.0, 1}.validate();
  if (method != "wavepacket" && method != "cone" && method != "both") {
    throw ParameterError("detector.method must be wavepacket, cone or both");
  }
  if (point.xi0 == 0.0) throw ParameterError("detector.xi0 must be nonzero");
  CriterionParams p = detector;
  p.b = b;
  p.validate();
  if (!(cutoff_width > 0.0)) throw ParameterError("detector.cutoff_width must be positive");
  if (!free_flow) powers.validate();
  if (!std::isfinite(t0)) throw ParameterError("solver.t0 must be finite");
  if (steps < 1) throw ParameterError("solver.steps must be >= 1");
  if (store_every < 0) throw ParameterError("solver.store_every must be >= 0");
  if (!(tile_threshold > 0.0 && tile_threshold < 1.0)) throw ParameterError("theorem.tile_threshold must lie in (0, 1)");
  if (slice.x_points < 1 || slice.xi_points < 1) throw ParameterError("slice sizes must be positive");
  if (!(slice.lambda >= 1.0)) throw ParameterError("slice.lambda must be >= 1");
}

Grid RunConfig::grid(std::size_t default_points) const {
  return Grid::make(dim, points ? points : default_points, half_width);
}

Field RunConfig::make_signal_field(const Grid& g) const { return make_signal(signal, g, signal_params); }

std::optional<NonlinearityPowers> RunConfig::nonlinearity() const {
  if (free_flow) return std::nullopt;
  return powers;
}

Theorem2Config RunConfig::theorem_config() const {
  Theorem2Config t;
  t.powers = powers;
  t.t0 = t0;
  t.xi0 = point.xi0;
  t.r = r;
  t.s = theorem_s;
  t.b = b;
  t.steps = steps;
  t.scheme = scheme;
  t.detector = detector;
  t.tile_threshold = tile_threshold;
  return t;
}

}  // namespace wpk
