#include "wpk/experiments.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "wpk/io.hpp"
#include "wpk/wavepacket.hpp"
#include "wpk/window.hpp"

#ifndef WPK_VERSION
#define WPK_VERSION "0.0.0"
#endif

namespace wpk {
namespace {

namespace fs = std::filesystem;

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path.string());
  return os;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

void write_curve(const fs::path& dir, const std::string& stem, const CriterionCurve& c) {
  auto csv = open_out(dir / (stem + ".csv"));
  write_curve_csv(csv, c);
  auto sum = open_out(dir / (stem + ".summary.txt"));
  write_curve_summary(sum, c);
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return v;
}

enum class ArtifactKind { Curve, Slice, Unknown };

ArtifactKind sniff(const fs::path& path) {
  std::ifstream is(path);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.rfind("lambda,integrand", 0) == 0) return ArtifactKind::Curve;
    if (line.rfind("# window", 0) == 0 || line.rfind("# lambda", 0) == 0 || line.rfind("x,xi,re,im", 0) == 0) {
      return ArtifactKind::Slice;
    }
    return ArtifactKind::Unknown;
  }
  return ArtifactKind::Unknown;
}

}  // namespace

const char* version_string() { return WPK_VERSION; }

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parameter:
    case ErrorKind::UnsupportedInput:
    case ErrorKind::Sizing:
    case ErrorKind::GridMismatch:
      return exit_code::usage;
    case ErrorKind::Io:
      return exit_code::missing_input;
    default:
      return exit_code::numerical;
  }
}

void set_worker_count(int n) {
  if (n < 1) throw ParameterError("worker count must be >= 1");
  omp_set_num_threads(n);
}

void write_manifest(const fs::path& dir, const std::string& command, const RunConfig& config) {
  ensure_dir(dir);
  KeyValues kv;
  kv.set("command", command);
  kv.set("version", version_string());
  const KeyValues cfg = config.to_kv();
  for (const auto& [k, v] : cfg.entries()) kv.set("config." + k, v);
  kv.set("tolerance.verdict_margin", config.detector.margin);
  kv.set("tolerance.verdict_window_len", config.detector.window_len);
  kv.set("tolerance.roundoff_floor", 1e-20);
  kv.set("tolerance.coverage", 1e-12);
  kv.set("tolerance.identity_relative", 1e-6);
  kv.set("tolerance.closed_form", 1e-8);
  kv.set("tolerance.window_change", 1e-6);
  kv.save(dir / "manifest.txt");
}

SuiteReport run_verify_identities(const RunConfig& config) {
  SuiteReport r = verify_identities(config);
  ensure_dir(config.output_dir);
  auto os = open_out(config.output_dir / "suite.txt");
  write_suite_report(os, r);
  write_manifest(config.output_dir, "verify-identities", config);
  return r;
}

DetectResult run_detect(const RunConfig& config) {
  config.validate();
  const Grid g = config.grid(16384);
  const Field f = config.make_signal_field(g);
  CriterionParams p = config.detector;
  p.b = config.b;
  DetectResult res;
  if (config.method != "cone") res.curves.push_back(wavepacket_detect(f, config.point, p, window_shape(config.window)));
  if (config.method != "wavepacket") {
    res.curves.push_back(cone_fourier_detect(f, config.point, p.s, config.cutoff_width, config.cone_halfangle,
                                             p.nyquist_fraction, p.margin, p.window_len));
  }
  std::optional<WPTSlice> slice;
  if (config.slice.enabled) {
    const Window w = Window::dilated(window_shape(config.window), config.b, config.slice.lambda);
    const auto xs = linspace(config.point.x0 - config.slice.x_halfwidth, config.point.x0 + config.slice.x_halfwidth,
                             config.slice.x_points);
    const auto xis = linspace(-config.slice.xi_max, config.slice.xi_max, config.slice.xi_points);
    slice = wpt(f, w, xs, xis);
  }
  res.verdict = res.curves.front().verdict;

  ensure_dir(config.output_dir);
  for (const auto& c : res.curves) write_curve(config.output_dir, c.label.rfind("cone", 0) == 0 ? "cone" : "wavepacket", c);
  if (slice) {
    auto os = open_out(config.output_dir / "slice.csv");
    write_slice_csv(os, *slice);
  }
  write_manifest(config.output_dir, "detect", config);
  return res;
}

CriterionCurve run_transported(const RunConfig& config) {
  config.validate();
  const Grid g = config.grid(8192);
  CriterionParams p = config.detector;
  p.b = config.b;
  p.t0 = config.t0;
  if (!(p.t0 >= 0.0)) throw ParameterError("solver.t0 must be >= 0 for the transported criterion");
  const CriterionCurve c = transported_criterion(config.make_signal_field(g), config.point.xi0, p);

  ensure_dir(config.output_dir);
  write_curve(config.output_dir, "transported", c);
  auto os = open_out(config.output_dir / "transported_z.csv");
  os << "lambda,argmax_z\n";
  for (std::size_t j = 0; j < c.lambdas.size(); ++j)
    os << format_double(c.lambdas[j]) << "," << format_double(c.argmax_z[j]) << "\n";
  write_manifest(config.output_dir, "transported", config);
  return c;
}

SolveResult run_solve(const RunConfig& config) {
  config.validate();
  const Grid g = config.grid(1024);
  SolveOptions opts;
  opts.scheme = config.scheme;
  opts.substep = config.substep;
  opts.store_every = config.store_every > 0 ? config.store_every : config.steps;
  SolveResult res;
  res.trajectory = nls_solve(config.make_signal_field(g), config.nonlinearity(), config.t0, config.steps, opts);
  res.conservation = conservation_report(res.trajectory);

  ensure_dir(config.output_dir);
  save_trajectory(config.output_dir / "trajectory", res.trajectory);
  KeyValues kv;
  kv.set("steps", res.trajectory.n_steps);
  kv.set("t_end", res.trajectory.times.back());
  kv.set("stored_states", static_cast<long long>(res.trajectory.states.size()));
  kv.set("mass_initial", res.conservation.mass.front());
  kv.set("mass_final", res.conservation.mass.back());
  kv.set("mass_drift", res.conservation.mass_drift);
  if (res.conservation.has_energy) {
    kv.set("energy_initial", res.conservation.energy.front());
    kv.set("energy_final", res.conservation.energy.back());
    kv.set("energy_drift", res.conservation.energy_drift);
  }
  kv.set("blowup", res.trajectory.blowup ? *res.trajectory.blowup : std::string("none"));
  kv.save(config.output_dir / "summary.txt");
  write_manifest(config.output_dir, "solve", config);
  return res;
}

void print_theorem2_table(std::ostream& os, const Theorem2Report& r) {
  char buf[256];
  auto line = [&](const std::string& name, const std::optional<CriterionCurve>& c, const std::string& skip) {
    if (c) {
      std::snprintf(buf, sizeof buf, "  %-28s %-12s slope %+8.3f\n", name.c_str(), to_string(c->verdict),
                    c->tail_slope);
      os << buf;
    } else {
      os << "  " << name << std::string(name.size() < 28 ? 29 - name.size() : 1, ' ') << skip << "\n";
    }
  };
  os << "hypotheses\n";
  line("condition (2)", r.condition2, r.condition2_skip);
  line("condition (3)", r.condition3, r.condition3_skip);
  os << "conclusions at u(t0)\n";
  for (std::size_t k = 0; k < r.conclusions.size(); ++k) {
    std::snprintf(buf, sizeof buf, "K(z = %+.2f)", r.tile_centres[k]);
    line(buf, r.conclusions[k], "");
  }
  std::snprintf(buf, sizeof buf, "b inequality: 2r + n - 1 - 4s + b(4s + n) = %.4f (%s -1)\n", r.b_inequality_lhs,
                r.b_inequality_holds ? "<" : ">=");
  os << buf;
  os << "hypotheses convergent: " << (r.hypotheses_convergent ? "yes" : "no")
     << "; any conclusion divergent: " << (r.any_conclusion_divergent ? "yes" : "no")
     << "; implication held: " << (r.implication_held ? "yes" : "no") << "\n";
}

Theorem2Report run_theorem2(const RunConfig& config) {
  config.validate();
  if (config.free_flow) throw ParameterError("theorem2 needs a nonlinearity (solver.free = false)");
  const Grid g = config.grid(8192);
  Theorem2Report rep = theorem2_experiment(config.make_signal_field(g), config.theorem_config());

  const fs::path dir = config.output_dir;
  ensure_dir(dir / "conclusions");
  KeyValues kv;
  if (rep.condition2) write_curve(dir, "condition2", *rep.condition2);
  if (rep.condition3) write_curve(dir, "condition3", *rep.condition3);
  kv.set("condition2", rep.condition2 ? to_string(rep.condition2->verdict) : rep.condition2_skip);
  kv.set("condition3", rep.condition3 ? to_string(rep.condition3->verdict) : rep.condition3_skip);
  char stem[64];
  for (std::size_t k = 0; k < rep.conclusions.size(); ++k) {
    std::snprintf(stem, sizeof stem, "tile_%03zu", k);
    write_curve(dir / "conclusions", stem, rep.conclusions[k]);
    kv.set(std::string("conclusion.") + stem + ".z", rep.tile_centres[k]);
    kv.set(std::string("conclusion.") + stem + ".verdict", to_string(rep.conclusions[k].verdict));
  }
  kv.set("hypotheses_convergent", rep.hypotheses_convergent);
  kv.set("any_conclusion_divergent", rep.any_conclusion_divergent);
  kv.set("implication_held", rep.implication_held);
  kv.set("b_inequality_lhs", rep.b_inequality_lhs);
  kv.set("b_inequality_holds", rep.b_inequality_holds);
  kv.save(dir / "report.txt");
  {
    auto os = open_out(dir / "table.txt");
    print_theorem2_table(os, rep);
  }
  save_trajectory(dir / "trajectory", rep.trajectory);
  write_manifest(dir, "theorem2", config);
  return rep;
}

std::vector<fs::path> run_plotdata(const std::vector<fs::path>& inputs, const fs::path& out_dir) {
  for (const auto& in : inputs)
    if (!fs::is_regular_file(in)) throw IoError("missing input " + in.string());
  ensure_dir(out_dir);
  std::vector<fs::path> written;
  for (const auto& in : inputs) {
    const std::string stem = in.stem().string();
    std::ifstream is(in);
    switch (sniff(in)) {
      case ArtifactKind::Curve: {
        const CriterionCurve c = read_curve_csv(is);
        const fs::path ll = out_dir / (stem + ".loglog.dat");
        auto os = open_out(ll);
        os << "# log10(lambda) log10(integrand)\n";
        for (std::size_t j = 0; j < c.lambdas.size(); ++j) {
          if (c.integrand[j] > 0.0)
            os << format_double(std::log10(c.lambdas[j])) << " " << format_double(std::log10(c.integrand[j])) << "\n";
        }
        written.push_back(ll);

        // top-decade least-squares line, as used for the verdict
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        const double top = c.lambdas.empty() ? 0.0 : c.lambdas.back();
        for (std::size_t j = 0; j < c.lambdas.size(); ++j) {
          if (c.lambdas[j] < top / 10.0 * (1 - 1e-12) || !(c.integrand[j] > 0.0)) continue;
          const double x = std::log10(c.lambdas[j]);
          const double y = std::log10(c.integrand[j]);
          sx += x, sy += y, sxx += x * x, sxy += x * y;
          ++n;
        }
        const fs::path fit = out_dir / (stem + ".fit.dat");
        auto fo = open_out(fit);
        if (n >= 2 && n * sxx - sx * sx > 0) {
          const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
          const double icpt = (sy - slope * sx) / n;
          fo << "# slope " << format_double(slope) << "\n";
          for (double x : {std::log10(top / 10.0), std::log10(top)})
            fo << format_double(x) << " " << format_double(icpt + slope * x) << "\n";
        } else {
          fo << "# no fit: fewer than two positive points in the top decade\n";
        }
        written.push_back(fit);
        break;
      }
      case ArtifactKind::Slice: {
        const WPTSlice s = read_slice_csv(is);
        const fs::path m = out_dir / (stem + ".matrix.dat");
        auto os = open_out(m);
        write_slice_matrix(os, s);
        written.push_back(m);
        break;
      }
      case ArtifactKind::Unknown:
        throw IoError("unrecognized artifact " + in.string() + " (expected a curve or slice CSV)");
    }
  }
  return written;
}

}  // namespace wpk
