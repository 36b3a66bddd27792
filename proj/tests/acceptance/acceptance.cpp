// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "wpk/corpus.hpp"
#include "wpk/microlocal.hpp"
#include "wpk/schrodinger.hpp"
#include "wpk/wavepacket.hpp"
#include "wpk/window.hpp"
#include "wpk/windows.hpp"

using namespace wpk;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const char* kSampled[] = {"gaussian", "step_gaussian", "abs_gaussian", "xplus32_bump",
                          "chirped_gaussian", "modulated_gaussian", "sech2_bump", "step_at"};

// 1. Plancherel on 20 signals and five windows; Gaussian against pi sqrt(2).
Outcome plancherel() {
  const Grid g = Grid::make(1, 1024, 20.0);
  std::vector<Field> signals;
  for (const char* name : kSampled) signals.push_back(make_signal(name, g));
  oracle::Rng rng(2024);
  while (signals.size() < 20) signals.push_back(Field::from_function(g, oracle::random_packet_sum(rng, 3)));
  double worst = 0.0;
  for (const auto& shape : window_corpus()) {
    const Window w = Window::dilated(shape, 0.25, 4.0);
    for (const auto& f : signals) worst = std::max(worst, std::abs(plancherel_ratio(f, w) - 1.0));
  }
  const Field gauss = Field::from_function(g, [](double x) { return cplx(std::exp(-x * x / 2)); });
  const Window phi = Window::gaussian({0.25, 1, 0, 1});
  const double norm = std::sqrt(2 * kPi) * l2_norm(phi.on_grid(g)) * l2_norm(gauss) * plancherel_ratio(gauss, phi);
  const double rel = std::abs(norm / (kPi * std::sqrt(2.0)) - 1.0);
  return {worst <= 1e-6 && rel <= 1e-6,
          fmt("max |ratio - 1| = %.2e over 20 signals x 5 windows; ||W_phi phi|| = %.9f vs pi sqrt2 (rel %.1e)", worst,
              norm, rel)};
}

// 2. Two-window inversion over every window pair with |(psi, phi)| > 1e-6.
Outcome inversion() {
  const Grid g = Grid::make(1, 512, 16.0);
  oracle::Rng rng(77);
  const std::vector<Field> signals = {Field::from_function(g, oracle::random_packet_sum(rng, 4)),
                                      make_signal("step_gaussian", g), make_signal("chirped_gaussian", g)};
  double worst = 0.0;
  int pairs = 0, skipped = 0;
  for (const auto& a : window_corpus()) {
    const Window phi = Window::dilated(a, 0.25, 1.0);
    std::vector<WPTSlice> F;
    for (const auto& f : signals) F.push_back(wpt_full(f, phi));
    for (const auto& b : window_corpus()) {
      const Window psi = Window::dilated(b, 0.25, 1.0);
      if (std::abs(inner_product(psi.on_grid(g), phi.on_grid(g))) <= 1e-6) {
        ++skipped;
        continue;
      }
      ++pairs;
      for (std::size_t k = 0; k < signals.size(); ++k)
        worst = std::max(worst, l2_norm(reconstruct(F[k], psi, phi) - signals[k]) / l2_norm(signals[k]));
    }
  }
  return {worst <= 1e-6 && pairs > 0,
          fmt("%d window pairs x 3 signals (%d orthogonal pairs excluded), max relative L2 error %.2e", pairs, skipped,
              worst)};
}

// 3. Closed-form evolved window against spectral propagation and a naive
//    long-double DFT propagator.
Outcome closed_form() {
  const Grid g = Grid::make(1, 4096, 32.0);
  const Grid small = Grid::make(1, 1024, 32.0);
  double worst = 0.0, worst_oracle = 0.0;
  for (double b : {0.25, 0.5})
    for (double lam : {1.0, 4.0, 16.0})
      for (double t : {0.0, 0.3, 1.0}) {
        const WindowSpec spec{b, lam, t, 1};
        worst = std::max(worst, max_abs_diff(evaluate_window(spec, g), free_propagate(evaluate_window(spec.at_time(0), g), t)));
        const Field w0 = evaluate_window(spec.at_time(0), small);
        const auto ref = oracle::free_flow(std::vector<oracle::cd>(w0.samples().begin(), w0.samples().end()), 32.0, t);
        const Field exact = evaluate_window(spec, small);
        for (std::size_t j = 0; j < ref.size(); ++j) worst_oracle = std::max(worst_oracle, std::abs(exact[j] - ref[j]));
      }
  return {worst <= 1e-8 && worst_oracle <= 1e-8,
          fmt("18 (b, lambda, t) cases: L_inf %.2e vs spectral flow (N=4096), %.2e vs naive DFT oracle", worst,
              worst_oracle)};
}

// 4. Pairing lower bounds and the t = 0 value.
Outcome pairing() {
  std::vector<double> lambdas;
  for (double l = 1.0; l <= 1000.0 * (1 + 1e-12); l *= std::pow(10.0, 0.1)) lambdas.push_back(l);
  const std::vector<double> times = {1e-4, 1e-3, 1e-2, 0.05, 0.1, 0.25};
  Outcome out;
  std::string d;
  for (const auto pw : {NonlinearityPowers{2, 0}, NonlinearityPowers{2, 1}}) {
    const auto rep = pairing_lower_bound_check(0.25, 1, lambdas, times, 0.5, pw);
    const bool ok = rep.inner.positive() && rep.outer.positive() && rep.inner.running_spread < 0.2 &&
                    rep.outer.running_spread < 0.2;
    out.pass = out.pass && ok;
    d += fmt("(p,q)=(%d,%d): c_inner %.4f spread %.3f, c_outer %.4f spread %.3f; ", pw.p, pw.q, rep.inner.constant,
             rep.inner.running_spread, rep.outer.constant, rep.outer.running_spread);
  }
  // closed form against direct quadrature of phi^{q+1} conj(phi)^p
  double quad_err = 0.0;
  for (const auto pw : {NonlinearityPowers{2, 0}, NonlinearityPowers{2, 1}})
    for (double lam : {1.0, 30.0})
      for (double t : {0.0, 0.2}) {
        const WindowSpec spec{0.25, lam, t, 1};
        const double a = std::pow(lam, 0.5);
        const oracle::cd den(1.0, a * t);
        const double R = 60.0;
        const int n = 200000;
        oracle::cld acc = 0.0L;
        for (int j = 0; j < n; ++j) {
          const double x = -R + 2 * R * j / n;
          const oracle::cd phi = std::pow(lam, 0.125) / std::sqrt(den) * std::exp(-a * x * x / (2.0 * den));
          oracle::cd v = 1.0;
          for (int k = 0; k <= pw.q; ++k) v *= phi;
          for (int k = 0; k < pw.p; ++k) v *= std::conj(phi);
          acc += oracle::cld(v.real(), v.imag());
        }
        const double mod = static_cast<double>(std::abs(acc)) * 2 * R / n;
        quad_err = std::max(quad_err, std::abs(nonlinear_pairing_modulus(spec, pw) / mod - 1.0));
      }
  const double v = nonlinear_pairing_modulus({0.25, 1, 0, 1}, {2, 0});
  const double e0 = std::abs(v - std::sqrt(2 * kPi / 3));
  out.pass = out.pass && e0 <= 1e-8 && quad_err <= 1e-8;
  out.detail = d + fmt("t=0 value %.9f (err %.1e); closed form vs quadrature %.1e", v, e0, quad_err);
  return out;
}

// 5. Transformed Duhamel identity: exact in the free case, second order otherwise.
Outcome duhamel() {
  Outcome out;
  {
    const Grid g = Grid::make(1, 1024, 24.0);
    const Field u0 = Field::from_function(g, [](double x) { return std::polar(std::exp(-x * x / 2), 0.7 * x); });
    const Trajectory tr = nls_solve(u0, std::nullopt, 0.8, 4);
    double worst = 0.0;
    for (const WindowSpec spec : {WindowSpec{0.25, 1, 0, 1}, WindowSpec{0.25, 4, 0, 1}, WindowSpec{0.5, 9, -0.3, 1}})
      worst = std::max(worst, duhamel_residual(tr, spec, {-1.0, 0.0, 0.5, 1.5}, {-2.0, 0.3, 1.0, 2.5}).max_residual);
    out.pass = worst <= 1e-8;
    out.detail = fmt("free residual %.2e; ", worst);
  }
  const Grid g = Grid::make(1, 512, 16.0);
  const Field u0 = Field::from_function(g, [](double x) { return cplx(std::exp(-x * x / 2)); });
  const WindowSpec spec{0.25, 2, 0, 1};
  for (const auto& [pw, t, name] : {std::tuple{NonlinearityPowers{1, 0}, 0.5, "linear"},
                                    std::tuple{NonlinearityPowers{2, 1}, 0.25, "cubic"}}) {
    std::vector<double> r;
    for (int n : {64, 128, 256})
      r.push_back(duhamel_residual(nls_solve(u0, pw, t, n), spec, {-0.5, 0.0, 0.75}, {-1.0, 0.5, 1.5}).max_residual);
    const double o1 = std::log2(r[0] / r[1]);
    const double o2 = std::log2(r[1] / r[2]);
    out.pass = out.pass && o1 >= 1.7 && o1 <= 2.3 && o2 >= 1.7 && o2 <= 2.3;
    out.detail += fmt("%s orders %.3f, %.3f; ", name, o1, o2);
  }
  return out;
}

// 6. Solver: linear exact solution, cubic conservation, time reversal.
Outcome solver() {
  const Grid g = Grid::make(1, 1024, 20.0);
  const double k = 0.5;
  const Field u0 = Field::from_function(g, [&](double x) { return std::polar(std::exp(-x * x / 2), k * x); });
  const Field lin = nls_solve(u0, NonlinearityPowers{1, 0}, 1.0, 256).final_state();
  // Galilean-boosted Gaussian, times the linear phase e^{-it}
  const double t = 1.0;
  const cplx den(1.0, t);
  double err = 0.0;
  for (std::size_t j = 0; j < g.points_per_axis(); ++j) {
    const double x = g.coord(j);
    const cplx exact = std::exp(cplx(0.0, k * x - k * k * t / 2 - t)) / std::sqrt(den) *
                       std::exp(-(x - k * t) * (x - k * t) / (2.0 * den));
    err = std::max(err, std::abs(lin[j] - exact));
  }
  const Field gauss = Field::from_function(g, [](double x) { return cplx(std::exp(-x * x / 2)); });
  const Trajectory tr = nls_solve(gauss, NonlinearityPowers{2, 1}, 0.5, 1024);
  const auto rep = conservation_report(tr);
  const Trajectory back = nls_solve(tr.final_state(), NonlinearityPowers{2, 1}, -0.5, 1024);
  const double rev = l2_norm(back.final_state() - gauss) / l2_norm(gauss);
  return {err <= 1e-6 && rep.mass_drift <= 1e-10 && rep.energy_drift <= 1e-6 && rev <= 1e-6,
          fmt("linear error %.2e; cubic mass drift %.2e, energy drift %.2e; reversal %.2e", err, rep.mass_drift,
              rep.energy_drift, rev)};
}

// 7. Detector agreement on the truth corpus and window independence.
Outcome detectors() {
  const Grid g = Grid::make(1, 16384, 20.0);
  const std::vector<double> levels = {0.25, 0.75, 1.25, 1.75};
  int both = 0, agree = 0, total = 0, window_conflicts = 0;
  std::string conflicts;
  for (const auto& name : truth_corpus()) {
    const Field f = make_signal(name, g);
    std::vector<CriterionCurve> raw;
    for (const auto& shape : window_corpus()) {
      CriterionParams p;
      p.s = levels.front();
      raw.push_back(wavepacket_detect(f, {0.0, 1.0}, p, shape));
    }
    for (double s : levels) {
      ++total;
      const Verdict wp = reweight_curve(raw.front(), s).verdict;
      const Verdict cone = cone_fourier_detect(f, {0.0, 1.0}, s).verdict;
      if (wp != Verdict::Inconclusive && cone != Verdict::Inconclusive) {
        ++both;
        if (wp == cone) ++agree;
        else conflicts += fmt(" %s@%.2f", name.c_str(), s);
      }
      std::optional<Verdict> seen;
      for (const auto& c : raw) {
        const Verdict v = reweight_curve(c, s).verdict;
        if (v == Verdict::Inconclusive) continue;
        if (seen && *seen != v) {
          ++window_conflicts;
          conflicts += fmt(" window:%s@%.2f", name.c_str(), s);
          break;
        }
        seen = v;
      }
    }
  }
  const double decisive = static_cast<double>(both) / total;
  return {agree == both && decisive >= 0.8 && window_conflicts == 0,
          fmt("agreement %d/%d decisive pairs, decisive fraction %.0f%% of %d, window conflicts %d%s", agree, both,
              100 * decisive, total, window_conflicts, conflicts.c_str())};
}

// 8. Localization around the jump of step_at.
Outcome localization() {
  const Grid g = Grid::make(1, 16384, 20.0);
  const double xs = *singular_point("step_at");
  const Field f = make_signal("step_at", g);
  std::vector<double> centres;
  for (double off : {0.0, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0, 2.5}) {
    centres.push_back(xs + off);
    if (off > 0) centres.push_back(xs - off);
  }
  CriterionParams p;
  p.s = 1.0;
  const auto tiles = wavepacket_detect_tiles(f, 1.0, centres, p);
  Outcome out;
  int checked = 0;
  for (double s : {1.0, 1.5}) {
    for (std::size_t k = 0; k < centres.size(); ++k) {
      const double dist = std::max(0.0, std::abs(centres[k] - xs) - p.k_halfwidth);
      const Verdict v = reweight_curve(tiles[k], s).verdict;
      ++checked;
      const bool contains = dist == 0.0 && std::abs(centres[k] - xs) < p.k_halfwidth;
      if ((v == Verdict::Divergent && dist > 0.5) || (dist >= 1.0 && v != Verdict::Convergent) ||
          (contains && v != Verdict::Divergent)) {
        out.pass = false;
        out.detail += fmt("s=%.1f z=%.2f (distance %.2f) -> %s; ", s, centres[k], dist, to_string(v));
      }
    }
  }
  out.detail += fmt("%d (s, K) cases, K half-width 0.5, distances 0..2 from x* = %.1f", checked, xs);
  return out;
}

// 9. Soundness sweep: (2) and (3) Convergent implies no Divergent conclusion.
Outcome soundness() {
  const Grid g = Grid::make(1, 8192, 20.0);
  int runs = 0, hyp = 0, violations = 0, conclusions = 0;
  std::string bad;
  for (const char* name : {"gaussian", "modulated_gaussian", "sech2_bump"})
    for (const auto pw : {NonlinearityPowers{2, 1}, NonlinearityPowers{2, 0}, NonlinearityPowers{3, 0},
                          NonlinearityPowers{1, 1}})
      for (double t0 : {0.25, 0.5}) {
        Theorem2Config cfg;
        cfg.powers = pw;
        cfg.t0 = t0;
        const auto rep = theorem2_experiment(make_signal(name, g), cfg);
        ++runs;
        conclusions += static_cast<int>(rep.conclusions.size());
        if (rep.hypotheses_convergent) ++hyp;
        if (!rep.implication_held) {
          ++violations;
          bad += fmt(" %s(p=%d,q=%d,t0=%.2f)", name, pw.p, pw.q, t0);
        }
      }
  return {violations == 0,
          fmt("%d configurations, %d with hypotheses Convergent, %d conclusion curves, %d violations%s", runs, hyp,
              conclusions, violations, bad.c_str())};
}

// 10. Pointwise window-change bound with nb = N[a].
Outcome window_change() {
  const Grid g = Grid::make(1, 512, 16.0);
  int checks = 0, failing = 0;
  double worst = -INFINITY;
  for (const char* name : kSampled) {
    const Field f = make_signal(name, g);
    for (const auto pw : {NonlinearityPowers{2, 1}, NonlinearityPowers{2, 0}, NonlinearityPowers{3, 0},
                          NonlinearityPowers{1, 1}})
      for (double lam : {1.0, 4.0, 16.0})
        for (double t : {0.0, 0.3}) {
          const Field a = evaluate_window({0.25, lam, t, 1}, g);
          std::vector<cplx> nb(a.samples().begin(), a.samples().end());
          for (auto& v : nb) v = pw.apply(v);
          const auto r = window_change_bound_check(f, a, Field::sampled(g, nb), 1e-6);
          ++checks;
          if (!r.passed()) ++failing;
          worst = std::max(worst, r.max_violation);
        }
  }
  return {failing == 0, fmt("%d (signal, N, lambda, t) cases, %d with violations, max(lhs - rhs) = %.2e", checks,
                            failing, worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"Plancherel", plancherel},
      {"two-window inversion", inversion},
      {"evolved-window closed form", closed_form},
      {"nonlinear pairing bounds", pairing},
      {"transformed Duhamel identity", duhamel},
      {"NLS solver", solver},
      {"detector equivalence", detectors},
      {"spatial localization", localization},
      {"theorem soundness sweep", soundness},
      {"window-change bound", window_change},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %zu (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
