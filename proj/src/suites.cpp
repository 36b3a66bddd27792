#include "wpk/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <ostream>
#include <random>

#include "wpk/error.hpp"
#include "wpk/wavepacket.hpp"
#include "wpk/window.hpp"

namespace wpk {
namespace {

constexpr double kPi = std::numbers::pi;

struct Ctx {
  const RunConfig& cfg;
  Grid grid;
  std::mt19937_64 rng;
  std::vector<CheckRecord>& out;

  void record(std::string name, double value, double tol, bool pass, std::string note = {}) {
    out.push_back({std::move(name), value, tol, pass ? CheckStatus::Pass : CheckStatus::Fail, std::move(note)});
  }
  void at_most(std::string name, double value, double tol, std::string note = {}) {
    record(std::move(name), value, tol, std::isfinite(value) && value <= tol, std::move(note));
  }

  // a few modulated, shifted Gaussians with random amplitudes
  Field random_signal() {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    struct Term {
      cplx amp;
      double c, w, k;
    };
    std::vector<Term> terms;
    for (int i = 0; i < 3; ++i)
      terms.push_back({{2 * u(rng) - 1, 2 * u(rng) - 1}, 6 * u(rng) - 3, 0.6 + 0.9 * u(rng), 8 * u(rng) - 4});
    return Field::from_function(grid, [&](double x) {
      cplx acc = 0.0;
      for (const auto& t : terms) acc += t.amp * std::polar(std::exp(-0.5 * std::pow((x - t.c) / t.w, 2)), t.k * x);
      return acc;
    });
  }

  // the configured signal, or a random one when it is a delta
  Field test_signal() {
    const Field f = cfg.make_signal_field(grid);
    return f.is_delta() ? random_signal() : f;
  }
};

// Same spacing, half-width doubled until `radius` fits.
Grid widened(const Grid& g, double radius) {
  std::size_t n = g.points_per_axis();
  double L = g.half_width();
  while (L < radius) {
    n *= 2;
    L *= 2;
  }
  return Grid::make(g.dim(), n, L);
}

void plancherel(Ctx& c) {
  const Grid& g = c.grid;
  const Field f = Field::from_function(g, [](double x) { return cplx(std::exp(-x * x / 2)); });
  const Window w = Window::gaussian({c.cfg.b, 1.0, 0.0, 1});
  const double norm_w = std::sqrt(2 * kPi) * l2_norm(w.on_grid(g)) * l2_norm(f) * plancherel_ratio(f, w);
  c.at_most("plancherel.gaussian_closed_form", std::abs(norm_w / (kPi * std::sqrt(2.0)) - 1.0), 1e-6,
            "||W_phi phi|| against pi sqrt(2)");
  const Window wl = Window::dilated(window_shape(c.cfg.window), c.cfg.b, 4.0);
  for (int k = 0; k < 4; ++k) {
    const Field r = c.random_signal();
    c.at_most("plancherel.random_" + std::to_string(k), std::abs(plancherel_ratio(r, wl) - 1.0), 1e-6);
  }
  c.at_most("plancherel.signal", std::abs(plancherel_ratio(c.test_signal(), wl) - 1.0), 1e-6);
}

void inversion(Ctx& c) {
  const Field f = c.test_signal();
  const auto& shapes = window_corpus();
  for (const auto& phi_shape : shapes) {
    const Window phi = Window::dilated(phi_shape, c.cfg.b, 1.0);
    const WPTSlice F = wpt_full(f, phi);
    for (const auto& psi_shape : shapes) {
      const Window psi = Window::dilated(psi_shape, c.cfg.b, 1.0);
      if (std::abs(inner_product(psi.on_grid(c.grid), phi.on_grid(c.grid))) <= 1e-6) continue;
      const Field back = reconstruct(F, psi, phi);
      c.at_most("inversion." + psi_shape.name + "/" + phi_shape.name, l2_norm(back - f) / l2_norm(f), 1e-6);
    }
  }
}

void covariance(Ctx& c) {
  const Grid& g = c.grid;
  const Field f = c.random_signal();
  const double a = 16 * g.spacing();
  const double eta = 4 * g.freq_spacing();
  std::vector<cplx> shifted(g.points_per_axis()), modulated(g.points_per_axis());
  const std::size_t n = g.points_per_axis();
  for (std::size_t j = 0; j < n; ++j) {
    shifted[j] = f[(j + n - 16) % n];
    modulated[j] = std::polar(1.0, eta * g.coord(j)) * f[j];
  }
  const Window w = Window::dilated(window_shape(c.cfg.window), c.cfg.b, 2.0);
  const std::vector<double> xs = {-1.0, 0.5, 2.0};
  const std::vector<double> xis = {-2.0, 0.3, 3.1};
  std::vector<double> xs_a, xis_e;
  for (double x : xs) xs_a.push_back(x - a);
  for (double k : xis) xis_e.push_back(k - eta);
  const WPTSlice s_fa = wpt(Field::sampled(g, shifted), w, xs, xis);
  const WPTSlice s_f = wpt(f, w, xs_a, xis);
  const WPTSlice s_fm = wpt(Field::sampled(g, modulated), w, xs, xis);
  const WPTSlice s_fe = wpt(f, w, xs, xis_e);
  double dt = 0.0, dm = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t k = 0; k < xis.size(); ++k) {
      dt = std::max(dt, std::abs(s_fa.at(i, k) - std::polar(1.0, -a * xis[k]) * s_f.at(i, k)));
      dm = std::max(dm, std::abs(s_fm.at(i, k) - s_fe.at(i, k)));
      scale = std::max(scale, std::abs(s_f.at(i, k)));
    }
  const double tol = 1e-10 * std::max(1.0, scale);
  c.at_most("covariance.translation", dt, tol);
  c.at_most("covariance.modulation", dm, tol);
}

void closed_form(Ctx& c) {
  for (double b : {0.25, 0.5})
    for (double lam : {1.0, 4.0, 16.0})
      for (double t : {0.0, 0.3, 1.0}) {
        const WindowSpec spec{b, lam, t, 1};
        const Grid g = widened(c.grid, 1.2 * window_support_radius(spec));
        const Field exact = evaluate_window(spec, g);
        const Field flowed = free_propagate(evaluate_window(spec.at_time(0.0), g), t);
        char name[96];
        std::snprintf(name, sizeof name, "closed_form.b%g_lambda%g_t%g", b, lam, t);
        c.at_most(name, max_abs_diff(exact, flowed), 1e-8);
      }
}

void scaling(Ctx& c) {
  for (double lam : {1.0, 4.0})
    for (double t : {0.0, 0.3}) {
      const WindowSpec spec{c.cfg.b, lam, t, 1};
      const Grid g = widened(c.grid, 1.2 * window_support_radius(spec));
      const Window w = Window::gaussian(spec);
      const Field phi = evaluate_window(spec, g);
      const std::vector<double> xs = {-1.0, 0.0, 0.7};
      const std::vector<double> xis = {-1.5, 0.0, 0.4, 2.0};
      const WPTSlice s = wpt(phi, w, xs, xis);
      double err = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t k = 0; k < xis.size(); ++k)
          err = std::max(err, std::abs(s.at(i, k) - window_self_wpt(spec, xs[i], xis[k])));
      char name[96];
      std::snprintf(name, sizeof name, "scaling.lambda%g_t%g", lam, t);
      c.at_most(name, err, 1e-8, "W_phi phi against its closed form");
    }
}

void conjugation(Ctx& c) {
  const Field u = c.random_signal();
  for (const WindowSpec spec : {WindowSpec{c.cfg.b, 1, 0, 1}, WindowSpec{c.cfg.b, 4, 0.3, 1}}) {
    const auto r = conjugation_identity_check(u, spec);
    char name[96];
    std::snprintf(name, sizeof name, "conjugation.lambda%g_t%g", spec.lambda, spec.t);
    c.at_most(name, r.max_deviation, r.tolerance);
  }
}

void pairing(Ctx& c) {
  std::vector<double> lambdas;
  for (double l = 1.0; l <= 1000.0 * (1 + 1e-12); l *= std::pow(10.0, 0.125)) lambdas.push_back(l);
  const std::vector<double> times = {1e-3, 1e-2, 0.1, 0.5};
  for (const auto pw : {NonlinearityPowers{2, 0}, NonlinearityPowers{2, 1}}) {
    const auto rep = pairing_lower_bound_check(0.25, 1, lambdas, times, 1.0, pw);
    const std::string tag = "pairing.p" + std::to_string(pw.p) + "q" + std::to_string(pw.q);
    for (const auto& [regime, s] : {std::pair{"inner", rep.inner}, std::pair{"outer", rep.outer}}) {
      c.record(tag + "." + regime + "_constant", s.constant, 0.0, s.positive(), "must be > 0");
      c.at_most(tag + "." + regime + "_spread", s.running_spread, 0.2);
    }
  }
  const double v = nonlinear_pairing_modulus({0.25, 1, 0, 1}, {2, 0});
  c.at_most("pairing.t0_value", std::abs(v - std::sqrt(2 * kPi / 3)), 1e-8, "against sqrt(2 pi / 3)");
}

void window_change(Ctx& c) {
  const Field f = c.test_signal();
  const NonlinearityPowers pw = c.cfg.powers;
  for (double lam : {1.0, 4.0, 16.0})
    for (double t : {0.0, 0.3}) {
      const Field a = evaluate_window({c.cfg.b, lam, t, 1}, c.grid);
      std::vector<cplx> nb(a.samples().begin(), a.samples().end());
      for (auto& v : nb) v = pw.apply(v);
      const auto r = window_change_bound_check(f, a, Field::sampled(c.grid, nb), 1e-6);
      char name[96];
      std::snprintf(name, sizeof name, "window_change.lambda%g_t%g", lam, t);
      c.record(name, r.max_violation, r.tolerance, r.passed(),
               std::to_string(r.violations) + " of " + std::to_string(r.points) + " points above tolerance");
    }
}

void duhamel(Ctx& c) {
  const Field u0 = c.test_signal();
  const Trajectory tr = nls_solve(u0, std::nullopt, 0.8, 4);
  const std::vector<double> xs = {-1.0, 0.0, 0.5, 1.5};
  const std::vector<double> xis = {-2.0, 0.3, 1.0, 2.5};
  for (const WindowSpec spec : {WindowSpec{c.cfg.b, 1, 0, 1}, WindowSpec{c.cfg.b, 4, 0, 1}}) {
    const auto rep = duhamel_residual(tr, spec, xs, xis);
    char name[96];
    std::snprintf(name, sizeof name, "duhamel.free_lambda%g", spec.lambda);
    c.at_most(name, rep.max_residual, 1e-8 * std::max(1.0, rep.max_lhs));
  }
}

using Group = std::pair<const char*, std::function<void(Ctx&)>>;

const std::vector<Group>& groups() {
  static const std::vector<Group> g = {
      {"plancherel", plancherel}, {"inversion", inversion},     {"covariance", covariance},
      {"closed_form", closed_form}, {"scaling", scaling},       {"conjugation", conjugation},
      {"pairing", pairing},       {"window_change", window_change}, {"duhamel", duhamel},
  };
  return g;
}

bool skippable(ErrorKind k) {
  return k == ErrorKind::Resolution || k == ErrorKind::FrequencyRange || k == ErrorKind::Sizing ||
         k == ErrorKind::DegenerateInput || k == ErrorKind::UnsupportedInput;
}

}  // namespace

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skip: return "skip";
  }
  return "skip";
}

const char* to_string(SuiteStatus s) {
  switch (s) {
    case SuiteStatus::Pass: return "pass";
    case SuiteStatus::Fail: return "fail";
    case SuiteStatus::Incomplete: return "incomplete";
    case SuiteStatus::Errored: return "errored";
  }
  return "errored";
}

void SuiteReport::finalize() {
  if (!error.empty()) {
    status = SuiteStatus::Errored;
    return;
  }
  const auto has = [&](CheckStatus s) {
    return std::any_of(records.begin(), records.end(), [&](const CheckRecord& r) { return r.status == s; });
  };
  status = has(CheckStatus::Fail) ? SuiteStatus::Fail
           : has(CheckStatus::Skip) ? SuiteStatus::Incomplete
                                    : SuiteStatus::Pass;
}

const std::vector<std::string>& identity_check_groups() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& g : groups()) v.push_back(g.first);
    return v;
  }();
  return names;
}

SuiteReport verify_identities(const RunConfig& config) {
  config.validate();
  for (const auto& name : config.checks)
    if (std::find(identity_check_groups().begin(), identity_check_groups().end(), name) ==
        identity_check_groups().end()) {
      throw ParameterError("unknown check group '" + name + "'");
    }
  const auto start = std::chrono::steady_clock::now();
  SuiteReport report;
  report.name = "verify-identities";
  const Grid grid = config.grid(1024);
  if (grid.dim() != 1) throw SizingError("the identity suite runs on 1-D grids");
  Ctx ctx{config, grid, std::mt19937_64(config.seed), report.records};
  for (const auto& [name, run] : groups()) {
    const bool selected = config.all_checks ||
                          std::find(config.checks.begin(), config.checks.end(), name) != config.checks.end();
    if (!selected) continue;
    try {
      run(ctx);
    } catch (const Error& e) {
      if (!skippable(e.kind())) {
        report.error = std::string(name) + ": " + e.what();
        break;
      }
      report.records.push_back({std::string(name), NAN, NAN, CheckStatus::Skip,
                                std::string(to_string(e.kind())) + ": " + e.what()});
    } catch (const std::exception& e) {
      report.error = std::string(name) + ": " + e.what();
      break;
    }
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.finalize();
  return report;
}

void write_suite_report(std::ostream& os, const SuiteReport& r) {
  KeyValues kv;
  kv.set("suite", r.name);
  kv.set("status", to_string(r.status));
  kv.set("checks", static_cast<long long>(r.records.size()));
  if (!r.error.empty()) kv.set("error", r.error);
  for (const auto& c : r.records) {
    const std::string k = "check." + c.name;
    kv.set(k + ".value", c.value);
    kv.set(k + ".tolerance", c.tolerance);
    kv.set(k + ".status", to_string(c.status));
    if (!c.note.empty()) kv.set(k + ".note", c.note);
  }
  kv.write(os);
}

void print_suite_table(std::ostream& os, const SuiteReport& r) {
  std::size_t width = 5;
  for (const auto& c : r.records) width = std::max(width, c.name.size());
  char buf[512];
  std::snprintf(buf, sizeof buf, "%-*s  %12s  %10s  %s\n", static_cast<int>(width), "check", "value",
                "tolerance", "status");
  os << buf;
  for (const auto& c : r.records) {
    std::snprintf(buf, sizeof buf, "%-*s  %12.3e  %10.1e  %s", static_cast<int>(width), c.name.c_str(), c.value,
                  c.tolerance, to_string(c.status));
    os << buf;
    if (c.status != CheckStatus::Pass && !c.note.empty()) os << "  (" << c.note << ")";
    os << "\n";
  }
  std::snprintf(buf, sizeof buf, "%s: %s, %zu checks, %.2f s\n", r.name.c_str(), to_string(r.status),
                r.records.size(), r.wall_seconds);
  os << buf;
  if (!r.error.empty()) os << "error: " << r.error << "\n";
}

}  // namespace wpk
