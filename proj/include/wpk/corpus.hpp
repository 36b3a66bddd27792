#pragma once

// Built-in signals with known H^s wave-front behaviour. Thresholds live next
// to the formulas they follow from.

#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wpk/grid_field.hpp"

namespace wpk {

using SignalParams = std::map<std::string, double>;

struct CorpusEntry {
  std::string name;
  std::string description;
  // (x*, xi) is in WF_{H^s} exactly for s above this threshold (both
  // directions); +infinity for Schwartz data.
  double threshold = std::numeric_limits<double>::infinity();
  // location x* of the singularity ("x0" parameter shifts it)
  std::optional<double> singular_point;
  SignalParams defaults;
  std::function<Field(const Grid&, const SignalParams&)> make;
};

const std::vector<CorpusEntry>& signal_corpus();
/// Throws ParameterError for unknown names.
const CorpusEntry& corpus_entry(const std::string& name);
/// Parameters not given fall back to the entry defaults; unknown keys are errors.
Field make_signal(const std::string& name, const Grid& grid, const SignalParams& params = {});
std::optional<double> singular_point(const std::string& name, const SignalParams& params = {});

/// The six-signal truth corpus of the detector-agreement check.
std::vector<std::string> truth_corpus();

}  // namespace wpk
