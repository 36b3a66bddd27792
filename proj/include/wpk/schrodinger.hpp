#pragma once

// Free propagator and split-step solver for  i u_t + (1/2) Delta u = u^p conj(u)^q,
// conservation diagnostics, and the transformed Duhamel identity
//
//   W_{phi^{(t)}} u(t)(x, xi) = e^{-i|xi|^2 t/2} W_phi u0(x - t xi, xi)
//       - i \int_0^t e^{-i|xi|^2 (t-tau)/2} W_{phi^{(tau)}}[N[u(tau)]](x + (tau - t) xi, xi) dtau.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wpk/grid_field.hpp"
#include "wpk/windows.hpp"

namespace wpk {

enum class StepScheme { Strang, Lie };
/// Nonlinear substep: exact phase rotation (only when p = q + 1) or RK4.
enum class Substep { Auto, ExactPhase, RK4 };

const char* to_string(StepScheme s);
const char* to_string(Substep s);

/// e^{it Delta/2} f via the Fourier multiplier e^{-i|xi|^2 t/2}.
Field free_propagate(const Field& f, double t);

struct Trajectory {
  std::vector<double> times;
  std::vector<Field> states;
  std::optional<NonlinearityPowers> powers;  // empty: free flow
  StepScheme scheme = StepScheme::Strang;
  Substep substep = Substep::ExactPhase;
  int n_steps = 0;
  // set when a non-finite value appeared; states end at the last finite one
  std::optional<std::string> blowup;

  const Field& final_state() const { return states.back(); }
};

struct SolveOptions {
  StepScheme scheme = StepScheme::Strang;
  Substep substep = Substep::Auto;
  int store_every = 1;  // keep every k-th state (the final one always)
};

/// Integrates to t_end (may be negative) in n_steps equal steps.
/// Throws ParameterError for n_steps < 1 or ExactPhase with p != q + 1.
Trajectory nls_solve(const Field& u0, std::optional<NonlinearityPowers> powers, double t_end,
                     int n_steps, const SolveOptions& options = {});

struct ConservationReport {
  std::vector<double> mass;    // ||u||^2
  std::vector<double> energy;  // empty unless p = q + 1 (or free flow)
  double mass_drift = 0.0;     // max relative deviation from the initial value
  double energy_drift = 0.0;
  bool has_energy = false;
};

ConservationReport conservation_report(const Trajectory& traj);

/// (1/2)||grad u||^2 + (1/(q+1)) \int |u|^{2q+2}; kinetic part alone for free flow.
double nls_energy(const Field& u, const std::optional<NonlinearityPowers>& powers);

struct DuhamelReport {
  std::vector<double> x;
  std::vector<double> xi;
  std::vector<double> residual;  // |LHS - RHS| per (x, xi), row-major in x
  double max_residual = 0.0;
  double max_lhs = 0.0;
  // Duhamel integral re-evaluated on every other state; flagged when it
  // differs from the full trapezoid by more than 10%.
  double integral_change = 0.0;
  bool under_resolved = false;
};

/// Checks the identity above for the window family phi_lambda^{(spec.t + tau)}
/// on a trajectory that stored every step starting at t = 0.
DuhamelReport duhamel_residual(const Trajectory& traj, const WindowSpec& spec,
                               const std::vector<double>& xs, const std::vector<double>& xis);

/// Directory of state_NNNNN.field files plus manifest.txt (key = value).
void save_trajectory(const std::filesystem::path& dir, const Trajectory& traj);
Trajectory load_trajectory(const std::filesystem::path& dir);

}  // namespace wpk
