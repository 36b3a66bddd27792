#pragma once

// Dilated Gaussian windows phi_lambda(x) = lambda^{nb/2} exp(-|lambda^b x|^2 / 2)
// and their exact free Schrodinger evolution phi_lambda^{(t)} = e^{it Delta/2} phi_lambda.
//
// With a = lambda^{2b}:
//   phi_lambda^{(t)}(x) = lambda^{nb/2} (1 + i a t)^{-n/2} exp(-a |x|^2 / (2 (1 + i a t)))

#include <iosfwd>
#include <span>
#include <vector>

#include "wpk/grid_field.hpp"

namespace wpk {

struct WindowSpec {
  double b = 0.25;       // scale exponent, 0 < b < 1
  double lambda = 1.0;   // dilation, >= 1
  double t = 0.0;        // free evolution time
  int dim = 1;

  /// Throws ParameterError on out-of-range fields.
  void validate() const;
  /// Additionally enforces b <= 1/2 (theorem-level runs).
  void validate_theorem() const;

  double scale() const;  // lambda^b
  WindowSpec at_time(double time) const {
    WindowSpec s = *this;
    s.t = time;
    return s;
  }
};

/// Powers of the nonlinearity N[u] = u^p conj(u)^q.
struct NonlinearityPowers {
  int p = 2;
  int q = 1;

  void validate() const;
  int degree() const noexcept { return p + q; }
  bool modulus_preserving() const noexcept { return p == q + 1; }
  cplx apply(cplx u) const;
};

cplx window_value(const WindowSpec& spec, double x);
cplx window_value(const WindowSpec& spec, double x, double y);

/// Radius beyond which |phi_lambda^{(t)}| < 1e-17 of its peak.
double window_support_radius(const WindowSpec& spec);

/// Samples phi_lambda^{(t)} on the grid. Throws ResolutionError when
/// lambda^b * dx > 0.5.
Field evaluate_window(const WindowSpec& spec, const Grid& grid);

/// Closed form of W_{phi_lambda^{(t)}}[phi_lambda^{(t)}](x, xi), built from
/// W_phi[phi](x, xi) = pi^{n/2} exp(-|x|^2/4 - |xi|^2/4 - i x.xi/2) and the
/// scaling / evolution covariances.
cplx window_self_wpt(const WindowSpec& spec, std::span<const double> x,
                     std::span<const double> xi);
cplx window_self_wpt(const WindowSpec& spec, double x, double xi);

/// (phi_lambda^{(t)}, N[phi_lambda^{(t)}]) in closed form.
cplx nonlinear_pairing(const WindowSpec& spec, const NonlinearityPowers& powers);

/// |(phi, N[phi])| from the real closed form
///   lambda^{nb(p+q-1)/2} (1+a^2t^2)^{-n(p+q+1)/4}
///     |2 pi (1+a^2t^2) / ((p+q+1) + i (p-q-1) a t)|^{n/2}.
double nonlinear_pairing_modulus(const WindowSpec& spec, const NonlinearityPowers& powers);

enum class PairingRegime { Inner, Outer };

struct PairingSample {
  double lambda = 0.0;
  double t = 0.0;
  double abs_pairing = 0.0;
  PairingRegime regime = PairingRegime::Inner;
  double ratio = 0.0;  // abs_pairing / regime bound
};

struct PairingRegimeSummary {
  // inf of the ratio over every (lambda, t) sample in the regime
  double constant = 0.0;
  // per-lambda minima
  double per_lambda_min = 0.0;
  double per_lambda_max = 0.0;
  // relative spread of the running infimum c(Lambda) = inf_{lambda <= Lambda}
  double running_spread = 0.0;
  std::size_t samples = 0;

  bool positive() const { return samples > 0 && constant > 0.0; }
};

struct PairingBoundReport {
  NonlinearityPowers powers;
  double b = 0.0;
  int dim = 1;
  double t0 = 0.0;
  std::vector<PairingSample> samples;
  PairingRegimeSummary inner;
  PairingRegimeSummary outer;
};

/// Sweeps |(phi_lambda^{(t)}, N[phi_lambda^{(t)}])| against
///   lambda^{nb(p+q-1)/2}   for |t| <= lambda^{-(p+q)nb}
///   lambda^{-nb(p+q+1)/2}  for lambda^{-(p+q)nb} <= |t| <= t0
/// over the given lambda values. Each lambda is sampled at the regime
/// boundary, at t = 0 and t = t0, and at `times` (absolute values in [0, t0]).
PairingBoundReport pairing_lower_bound_check(double b, int dim,
                                             std::span<const double> lambdas,
                                             std::span<const double> times, double t0,
                                             const NonlinearityPowers& powers);

/// CSV: lambda,t,abs_pairing,bound_regime,ratio
void write_pairing_csv(std::ostream& os, const PairingBoundReport& report);

}  // namespace wpk
