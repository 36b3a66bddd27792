#include "wpk/schrodinger.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "wpk/error.hpp"
#include "wpk/fft.hpp"
#include "wpk/io.hpp"
#include "wpk/kernels.hpp"
#include "wpk/wavepacket.hpp"
#include "wpk/window.hpp"

namespace wpk {
namespace {

// |xi|^2 in FFT ordering. The lattice phase e^{iL xi} of the forward
// transform cancels against the inverse, so no re-centring is needed.
std::vector<double> xi_squared(const Grid& g) {
  const std::size_t n = g.points_per_axis();
  std::vector<double> k2(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double kk = k < n / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(n);
    k2[k] = kk * g.freq_spacing() * kk * g.freq_spacing();
  }
  if (g.dim() == 1) return k2;
  std::vector<double> out(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) out[a * n + b] = k2[a] + k2[b];
  return out;
}

void forward(const Grid& g, std::vector<cplx>& u) {
  if (g.dim() == 1) fft::transform_1d(u, fft::Direction::Forward);
  else fft::transform_2d(u, g.points_per_axis(), g.points_per_axis(), fft::Direction::Forward);
}

void backward(const Grid& g, std::vector<cplx>& u) {
  if (g.dim() == 1) fft::transform_1d(u, fft::Direction::Backward);
  else fft::transform_2d(u, g.points_per_axis(), g.points_per_axis(), fft::Direction::Backward);
}

class FreeStep {
 public:
  FreeStep(const Grid& g, double dt) : grid_(g) {
    const auto k2 = xi_squared(g);
    const double inv_n = 1.0 / static_cast<double>(k2.size());
    mult_.resize(k2.size());
    for (std::size_t k = 0; k < k2.size(); ++k) mult_[k] = std::polar(inv_n, -0.5 * k2[k] * dt);
  }

  void apply(std::vector<cplx>& u) const {
    forward(grid_, u);
    const auto n = static_cast<std::ptrdiff_t>(u.size());
#pragma omp parallel for schedule(static) if (n > 8192)
    for (std::ptrdiff_t k = 0; k < n; ++k) u[k] *= mult_[k];
    backward(grid_, u);
  }

 private:
  Grid grid_;
  std::vector<cplx> mult_;
};

// i u' = u^p conj(u)^q, pointwise over tau.
void nonlinear_step(std::vector<cplx>& u, const NonlinearityPowers& pw, Substep sub, double tau) {
  const auto n = static_cast<std::ptrdiff_t>(u.size());
  if (sub == Substep::ExactPhase) {
#pragma omp parallel for schedule(static) if (n > 8192)
    for (std::ptrdiff_t j = 0; j < n; ++j) {
      const double m2 = std::norm(u[j]);
      u[j] *= std::polar(1.0, -std::pow(m2, pw.q) * tau);
    }
    return;
  }
  const cplx mi(0.0, -1.0);
#pragma omp parallel for schedule(static) if (n > 8192)
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    auto rhs = [&](cplx v) { return mi * pw.apply(v); };
    const cplx v = u[j];
    const cplx k1 = rhs(v);
    const cplx k2 = rhs(v + 0.5 * tau * k1);
    const cplx k3 = rhs(v + 0.5 * tau * k2);
    const cplx k4 = rhs(v + tau * k3);
    u[j] = v + tau / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
}

bool all_finite(const std::vector<cplx>& u) {
  return std::all_of(u.begin(), u.end(),
                     [](cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

}  // namespace

const char* to_string(StepScheme s) { return s == StepScheme::Strang ? "strang" : "lie"; }

const char* to_string(Substep s) {
  switch (s) {
    case Substep::Auto: return "auto";
    case Substep::ExactPhase: return "exact_phase";
    case Substep::RK4: return "rk4";
  }
  return "unknown";
}

Field free_propagate(const Field& f, double t) {
  require_sampled(f, "free_propagate");
  if (f.domain() != Domain::Position) throw UnsupportedInputError("free_propagate expects a position-domain field");
  std::vector<cplx> u(f.samples().begin(), f.samples().end());
  if (t != 0.0) FreeStep(f.grid(), t).apply(u);
  return Field::sampled(f.grid(), std::move(u));
}

Trajectory nls_solve(const Field& u0, std::optional<NonlinearityPowers> powers, double t_end,
                     int n_steps, const SolveOptions& options) {
  require_sampled(u0, "nls_solve");
  if (n_steps < 1) throw ParameterError("n_steps must be >= 1");
  if (!std::isfinite(t_end)) throw ParameterError("t_end must be finite");
  if (options.store_every < 1) throw ParameterError("store_every must be >= 1");

  Trajectory traj;
  traj.powers = powers;
  traj.scheme = options.scheme;
  traj.n_steps = n_steps;
  Substep sub = options.substep;
  if (powers) {
    powers->validate();
    if (sub == Substep::Auto) sub = powers->modulus_preserving() ? Substep::ExactPhase : Substep::RK4;
    if (sub == Substep::ExactPhase && !powers->modulus_preserving()) {
      throw ParameterError("exact-phase substep needs p = q + 1");
    }
  } else if (sub == Substep::Auto) {
    sub = Substep::ExactPhase;
  }
  traj.substep = sub;
  traj.times.push_back(0.0);
  traj.states.push_back(u0);
  if (t_end == 0.0) return traj;

  const Grid& g = u0.grid();
  const double dt = t_end / n_steps;
  const bool strang = options.scheme == StepScheme::Strang;
  const FreeStep full(g, dt);
  const FreeStep half(g, dt / 2);
  std::vector<cplx> u(u0.samples().begin(), u0.samples().end());

  for (int step = 1; step <= n_steps; ++step) {
    if (!powers) {
      full.apply(u);
    } else if (strang) {
      half.apply(u);
      nonlinear_step(u, *powers, sub, dt);
      half.apply(u);
    } else {
      full.apply(u);
      nonlinear_step(u, *powers, sub, dt);
    }
    if (!all_finite(u)) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "non-finite values at step %d (t = %.6g); last finite state t = %.6g",
                    step, step * dt, traj.times.back());
      traj.blowup = buf;
      return traj;
    }
    if (step % options.store_every == 0 || step == n_steps) {
      traj.times.push_back(step == n_steps ? t_end : step * dt);
      traj.states.push_back(Field::sampled(g, u));
    }
  }
  return traj;
}

double nls_energy(const Field& u, const std::optional<NonlinearityPowers>& powers) {
  const Grid& g = u.grid();
  std::vector<cplx> s(u.samples().begin(), u.samples().end());
  forward(g, s);
  const auto k2 = xi_squared(g);
  double kin = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) kin += k2[k] * std::norm(s[k]);
  // discrete Parseval: sum |u_j|^2 dx^n = sum |U_k|^2 dx^n / N^n
  kin *= g.cell_volume() / static_cast<double>(s.size());
  double pot = 0.0;
  if (powers) {
    const int q = powers->q;
    for (const cplx v : u.samples()) pot += std::pow(std::norm(v), q + 1);
    pot *= g.cell_volume() / (q + 1.0);
  }
  return 0.5 * kin + pot;
}

ConservationReport conservation_report(const Trajectory& traj) {
  ConservationReport r;
  r.has_energy = !traj.powers || traj.powers->modulus_preserving();
  for (const Field& u : traj.states) {
    const double m = l2_norm(u);
    r.mass.push_back(m * m);
    if (r.has_energy) r.energy.push_back(nls_energy(u, traj.powers));
  }
  auto drift = [](const std::vector<double>& v) {
    double d = 0.0;
    for (double x : v) d = std::max(d, std::abs(x - v.front()));
    return v.front() != 0.0 ? d / std::abs(v.front()) : d;
  };
  if (!r.mass.empty()) r.mass_drift = drift(r.mass);
  if (!r.energy.empty()) r.energy_drift = drift(r.energy);
  return r;
}

DuhamelReport duhamel_residual(const Trajectory& traj, const WindowSpec& spec,
                               const std::vector<double>& xs, const std::vector<double>& xis) {
  spec.validate();
  if (traj.states.empty()) throw ParameterError("empty trajectory");
  if (traj.states.size() != static_cast<std::size_t>(traj.n_steps) + 1) {
    throw ParameterError("Duhamel residual needs every step stored");
  }
  const Field& u0 = traj.states.front();
  const Grid& g = u0.grid();
  const std::size_t nt = traj.times.size();
  const double t = traj.times.back();
  const std::size_t nx = xs.size();
  const std::size_t nk = xis.size();

  // per time sample: W_{phi^{(s + tau)}}[N[u(tau)]](x + (tau - t) xi, xi)
  std::vector<cplx> integrand(nt * nx * nk, cplx(0.0));
  if (traj.powers) {
    const NonlinearityPowers pw = *traj.powers;
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t kk = 0; kk < static_cast<std::ptrdiff_t>(nt); ++kk) {
      const auto k = static_cast<std::size_t>(kk);
      const double tau = traj.times[k];
      std::vector<cplx> nl(traj.states[k].samples().begin(), traj.states[k].samples().end());
      for (auto& v : nl) v = pw.apply(v);
      const Field nf = Field::sampled(g, std::move(nl));
      const Window w = Window::gaussian(spec.at_time(spec.t + tau));
      std::vector<double> shifted(nx);
      for (std::size_t b = 0; b < nk; ++b) {
        for (std::size_t a = 0; a < nx; ++a) shifted[a] = xs[a] + (tau - t) * xis[b];
        const double one[1] = {xis[b]};
        const WPTSlice s = wpt(nf, w, shifted, one, Exec::Serial);
        for (std::size_t a = 0; a < nx; ++a) integrand[(k * nx + a) * nk + b] = s.values[a];
      }
    }
  }

  DuhamelReport rep;
  rep.x = xs;
  rep.xi = xis;
  rep.residual.assign(nx * nk, 0.0);

  const WPTSlice lhs = wpt(traj.final_state(), Window::gaussian(spec.at_time(spec.t + t)), xs, xis);
  const Window w0 = Window::gaussian(spec);
  double max_integral = 0.0;
  double max_change = 0.0;
  const bool can_halve = (nt - 1) % 2 == 0 && nt >= 3;
  for (std::size_t b = 0; b < nk; ++b) {
    const double xi = xis[b];
    std::vector<double> back(nx);
    for (std::size_t a = 0; a < nx; ++a) back[a] = xs[a] - t * xi;
    const double one[1] = {xi};
    const WPTSlice free_part = wpt(u0, w0, back, one);
    for (std::size_t a = 0; a < nx; ++a) {
      auto term = [&](std::size_t k) {
        return std::polar(1.0, -0.5 * xi * xi * (t - traj.times[k])) *
               integrand[(k * nx + a) * nk + b];
      };
      cplx full = 0.0;
      for (std::size_t k = 0; k + 1 < nt; ++k)
        full += 0.5 * (traj.times[k + 1] - traj.times[k]) * (term(k) + term(k + 1));
      if (can_halve) {
        cplx coarse = 0.0;
        for (std::size_t k = 0; k + 2 < nt; k += 2)
          coarse += 0.5 * (traj.times[k + 2] - traj.times[k]) * (term(k) + term(k + 2));
        max_change = std::max(max_change, std::abs(coarse - full));
      }
      max_integral = std::max(max_integral, std::abs(full));
      const cplx rhs = std::polar(1.0, -0.5 * xi * xi * t) * free_part.values[a] - cplx(0.0, 1.0) * full;
      const cplx l = lhs.at(a, b);
      rep.residual[a * nk + b] = std::abs(l - rhs);
      rep.max_residual = std::max(rep.max_residual, rep.residual[a * nk + b]);
      rep.max_lhs = std::max(rep.max_lhs, std::abs(l));
    }
  }
  rep.integral_change = max_integral > 0.0 ? max_change / max_integral : 0.0;
  rep.under_resolved = can_halve && rep.integral_change > 0.1;
  return rep;
}

void save_trajectory(const std::filesystem::path& dir, const Trajectory& traj) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  KeyValues m;
  m.set("states", static_cast<long long>(traj.states.size()));
  m.set("n_steps", traj.n_steps);
  m.set("scheme", to_string(traj.scheme));
  m.set("substep", to_string(traj.substep));
  m.set("nonlinear", traj.powers.has_value());
  if (traj.powers) {
    m.set("p", traj.powers->p);
    m.set("q", traj.powers->q);
  }
  std::string times;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "state_%05zu.field", k);
    save_field(dir / name, traj.states[k]);
    if (k) times += ' ';
    times += format_double(traj.times[k]);
  }
  m.set("times", times);
  if (traj.blowup) m.set("blowup", *traj.blowup);
  m.save(dir / "manifest.txt");
}

Trajectory load_trajectory(const std::filesystem::path& dir) {
  const KeyValues m = KeyValues::load(dir / "manifest.txt");
  Trajectory traj;
  traj.n_steps = static_cast<int>(m.get_int_or("n_steps", 0));
  traj.scheme = m.get_or("scheme", "strang") == "lie" ? StepScheme::Lie : StepScheme::Strang;
  traj.substep = m.get_or("substep", "exact_phase") == "rk4" ? Substep::RK4 : Substep::ExactPhase;
  if (m.get_bool_or("nonlinear", false)) {
    traj.powers = NonlinearityPowers{static_cast<int>(m.get_int_or("p", 0)),
                                     static_cast<int>(m.get_int_or("q", 0))};
  }
  if (m.has("blowup")) traj.blowup = m.get("blowup");
  std::istringstream ts(m.get("times"));
  double t;
  while (ts >> t) traj.times.push_back(t);
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "state_%05zu.field", k);
    traj.states.push_back(load_field(dir / name));
  }
  return traj;
}

}  // namespace wpk
