#include "wpk/corpus.hpp"

#include <cmath>

#include "wpk/error.hpp"

namespace wpk {
namespace {

double bump(double x, double w) {
  const double r = x / w;
  return std::abs(r) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - r * r)) : 0.0;
}

double sign(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

using Real = std::function<cplx(double, const SignalParams&)>;

std::function<Field(const Grid&, const SignalParams&)> sampled(Real fn) {
  return [fn](const Grid& g, const SignalParams& p) {
    if (g.dim() != 1) throw UnsupportedInputError("corpus signals are 1-D");
    return Field::from_function(g, [&](double x) { return fn(x, p); });
  };
}

const double kInf = std::numeric_limits<double>::infinity();

}  // namespace

const std::vector<CorpusEntry>& signal_corpus() {
  static const std::vector<CorpusEntry> corpus = {
      {"gaussian", "exp(-(x-x0)^2/2); Schwartz, WF empty", kInf, std::nullopt, {{"x0", 0.0}},
       sampled([](double x, const SignalParams& p) {
         const double d = x - p.at("x0");
         return cplx(std::exp(-d * d / 2));
       })},
      // F ~ C/xi at the jump: H^s near x0 iff s < 1/2
      {"step_gaussian", "sign(x-x0) exp(-(x-x0)^2); jump at x0", 0.5, 0.0, {{"x0", 0.0}},
       sampled([](double x, const SignalParams& p) {
         const double d = x - p.at("x0");
         return cplx(sign(d) * std::exp(-d * d));
       })},
      // F ~ C/xi^2 at the kink: threshold 3/2
      {"abs_gaussian", "|x-x0| exp(-(x-x0)^2); kink at x0", 1.5, 0.0, {{"x0", 0.0}},
       sampled([](double x, const SignalParams& p) {
         const double d = x - p.at("x0");
         return cplx(std::abs(d) * std::exp(-d * d));
       })},
      // F ~ C/xi^{5/2}: threshold 2
      {"xplus32_bump", "max(x-x0,0)^{3/2} bump(x-x0, 2)", 2.0, 0.0, {{"x0", 0.0}},
       sampled([](double x, const SignalParams& p) {
         const double d = x - p.at("x0");
         return cplx(d > 0 ? std::pow(d, 1.5) * bump(d, 2.0) : 0.0);
       })},
      // |F| constant: singular for every s >= -1/2
      {"dirac", "Dirac delta at x0 (closed-form paths only)", -0.5, 0.0, {{"x0", 0.0}},
       [](const Grid& g, const SignalParams& p) { return Field::dirac(g, {p.at("x0")}); }},
      {"chirped_gaussian", "exp(i x^2/2) exp(-x^2/9); smooth", kInf, std::nullopt, {},
       sampled([](double x, const SignalParams&) {
         return std::exp(cplx(-x * x / 9.0, x * x / 2.0));
       })},
      {"modulated_gaussian", "a exp(i k x) exp(-x^2/2); smooth", kInf, std::nullopt,
       {{"k", 2.0}, {"a", 1.0}},
       sampled([](double x, const SignalParams& p) {
         return p.at("a") * std::polar(std::exp(-x * x / 2), p.at("k") * x);
       })},
      {"sech2_bump", "a sech^2(x / w); smooth, wide", kInf, std::nullopt, {{"a", 0.7}, {"w", 1.1}},
       sampled([](double x, const SignalParams& p) {
         const double c = std::cosh(x / p.at("w"));
         return cplx(p.at("a") / (c * c));
       })},
      {"step_at", "sign(x-x0) exp(-(x-x0)^2) with the jump at x0 = 1 by default", 0.5, 0.0,
       {{"x0", 1.0}},
       sampled([](double x, const SignalParams& p) {
         const double d = x - p.at("x0");
         return cplx(sign(d) * std::exp(-d * d));
       })},
  };
  return corpus;
}

const CorpusEntry& corpus_entry(const std::string& name) {
  for (const auto& e : signal_corpus())
    if (e.name == name) return e;
  throw ParameterError("unknown corpus signal '" + name + "'");
}

namespace {
SignalParams resolve(const CorpusEntry& e, const SignalParams& params) {
  SignalParams p = e.defaults;
  for (const auto& [k, v] : params) {
    if (!p.count(k)) throw ParameterError("signal '" + e.name + "' has no parameter '" + k + "'");
    if (!std::isfinite(v)) throw ParameterError("signal parameter '" + k + "' must be finite");
    p[k] = v;
  }
  return p;
}
}  // namespace

Field make_signal(const std::string& name, const Grid& grid, const SignalParams& params) {
  const CorpusEntry& e = corpus_entry(name);
  return e.make(grid, resolve(e, params));
}

std::optional<double> singular_point(const std::string& name, const SignalParams& params) {
  const CorpusEntry& e = corpus_entry(name);
  if (!e.singular_point) return std::nullopt;
  const SignalParams p = resolve(e, params);
  return p.count("x0") ? p.at("x0") : *e.singular_point;
}

std::vector<std::string> truth_corpus() {
  return {"gaussian", "step_gaussian", "abs_gaussian", "xplus32_bump", "dirac", "chirped_gaussian"};
}

}  // namespace wpk
