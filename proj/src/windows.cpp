#include "wpk/windows.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "wpk/error.hpp"

namespace wpk {
namespace {

constexpr double kPi = std::numbers::pi;

// Window exponent where the modulus drops below 1e-17 of the peak.
constexpr double kSupportExponent = 39.2;

cplx ipow(cplx base, int k) {
  cplx r = 1.0;
  for (int i = 0; i < k; ++i) r *= base;
  return r;
}

// Prefactor lambda^{nb/2} (1 + i a t)^{-n/2} and exponent coefficient
// c = a / (1 + i a t), so that phi(x) = A exp(-c |x|^2 / 2).
struct GaussianForm {
  cplx amplitude;
  cplx coeff;
};

GaussianForm gaussian_form(const WindowSpec& spec) {
  const double a = std::pow(spec.lambda, 2.0 * spec.b);
  const cplx denom(1.0, a * spec.t);
  const double lam_pow = std::pow(spec.lambda, spec.dim * spec.b / 2.0);
  const cplx amp = spec.dim == 1 ? lam_pow / std::sqrt(denom) : lam_pow / denom;
  return {amp, a / denom};
}

}  // namespace

void WindowSpec::validate() const {
  if (dim != 1 && dim != 2) throw ParameterError("window dimension must be 1 or 2");
  if (!(b > 0.0 && b < 1.0)) throw ParameterError("window scale exponent b must lie in (0, 1)");
  if (!(lambda >= 1.0) || !std::isfinite(lambda)) throw ParameterError("window dilation lambda must be >= 1");
  if (!std::isfinite(t)) throw ParameterError("window time must be finite");
}

void WindowSpec::validate_theorem() const {
  validate();
  if (b > 0.5) throw ParameterError("theorem runs require b <= 1/2");
}

double WindowSpec::scale() const { return std::pow(lambda, b); }

void NonlinearityPowers::validate() const {
  if (p < 0 || q < 0 || p + q < 1) {
    throw ParameterError("nonlinearity powers need p, q >= 0 and p + q >= 1");
  }
}

cplx NonlinearityPowers::apply(cplx u) const { return ipow(u, p) * ipow(std::conj(u), q); }

cplx window_value(const WindowSpec& spec, double x) {
  const auto g = gaussian_form(spec);
  return g.amplitude * std::exp(-0.5 * g.coeff * (x * x));
}

cplx window_value(const WindowSpec& spec, double x, double y) {
  const auto g = gaussian_form(spec);
  return g.amplitude * std::exp(-0.5 * g.coeff * (x * x + y * y));
}

double window_support_radius(const WindowSpec& spec) {
  const double a = std::pow(spec.lambda, 2.0 * spec.b);
  const double spread = (1.0 + a * a * spec.t * spec.t) / a;
  return std::sqrt(2.0 * kSupportExponent * spread);
}

Field evaluate_window(const WindowSpec& spec, const Grid& grid) {
  spec.validate();
  if (spec.dim != grid.dim()) throw GridMismatchError("window and grid dimensions differ");
  if (spec.scale() * grid.spacing() > 0.5) {
    throw ResolutionError("window under-resolved: lambda^b * dx = " +
                          std::to_string(spec.scale() * grid.spacing()) + " > 0.5");
  }
  if (grid.dim() == 1) {
    return Field::from_function(grid, [&](double x) { return window_value(spec, x); });
  }
  return Field::from_function(grid,
                              [&](double x, double y) { return window_value(spec, x, y); });
}

cplx window_self_wpt(const WindowSpec& spec, std::span<const double> x,
                     std::span<const double> xi) {
  if (x.size() != static_cast<std::size_t>(spec.dim) || xi.size() != x.size()) {
    throw SizingError("window_self_wpt: point dimension does not match window");
  }
  const double scale = spec.scale();
  double x2 = 0.0;
  double xi2 = 0.0;
  double cross = 0.0;
  double raw_xi2 = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    // evolution covariance: shift x -> x - t xi; scaling: (x, xi) -> (lambda^b x, lambda^-b xi)
    const double xs = scale * (x[k] - spec.t * xi[k]);
    const double ks = xi[k] / scale;
    x2 += xs * xs;
    xi2 += ks * ks;
    cross += xs * ks;
    raw_xi2 += xi[k] * xi[k];
  }
  const double base_mod = std::pow(kPi, spec.dim / 2.0) * std::exp(-x2 / 4.0 - xi2 / 4.0);
  const double phase = -cross / 2.0 - spec.t * raw_xi2 / 2.0;
  return std::polar(base_mod, phase);
}

cplx window_self_wpt(const WindowSpec& spec, double x, double xi) {
  const double xs[1] = {x};
  const double ks[1] = {xi};
  return window_self_wpt(spec, std::span<const double>(xs), std::span<const double>(ks));
}

cplx nonlinear_pairing(const WindowSpec& spec, const NonlinearityPowers& powers) {
  spec.validate();
  powers.validate();
  // integrand phi^{q+1} conj(phi)^p = A^{q+1} conj(A)^p exp(-w |x|^2 / 2)
  const auto g = gaussian_form(spec);
  const cplx w = static_cast<double>(powers.q + 1) * g.coeff +
                 static_cast<double>(powers.p) * std::conj(g.coeff);
  const cplx gauss = 2.0 * kPi / w;  // Re w > 0, principal branch is the integral
  const cplx integral = spec.dim == 1 ? std::sqrt(gauss) : gauss;
  return ipow(g.amplitude, powers.q + 1) * ipow(std::conj(g.amplitude), powers.p) * integral;
}

double nonlinear_pairing_modulus(const WindowSpec& spec, const NonlinearityPowers& powers) {
  spec.validate();
  powers.validate();
  const double n = spec.dim;
  const double pq = powers.p + powers.q;
  const double a = std::pow(spec.lambda, 2.0 * spec.b);
  const double grow = 1.0 + a * a * spec.t * spec.t;
  const cplx denom(pq + 1.0, (powers.p - powers.q - 1.0) * a * spec.t);
  return std::pow(spec.lambda, n * spec.b * (pq - 1.0) / 2.0) *
         std::pow(grow, -n * (pq + 1.0) / 4.0) *
         std::pow(std::abs(2.0 * kPi * grow / denom), n / 2.0);
}

PairingBoundReport pairing_lower_bound_check(double b, int dim,
                                             std::span<const double> lambdas,
                                             std::span<const double> times, double t0,
                                             const NonlinearityPowers& powers) {
  powers.validate();
  if (!(t0 >= 0.0)) throw ParameterError("t0 must be nonnegative");
  PairingBoundReport report;
  report.powers = powers;
  report.b = b;
  report.dim = dim;
  report.t0 = t0;

  const double nb = dim * b;
  const double pq = powers.degree();
  struct Running {
    double inf = INFINITY;
    double first = NAN;
    double per_min = INFINITY;
    double per_max = 0.0;
    std::size_t count = 0;
  };
  Running inner;
  Running outer;

  for (const double lambda : lambdas) {
    WindowSpec spec{b, lambda, 0.0, dim};
    spec.validate();
    const double boundary = std::min(std::pow(lambda, -pq * nb), t0);
    const double inner_bound = std::pow(lambda, nb * (pq - 1.0) / 2.0);
    const double outer_bound = std::pow(lambda, -nb * (pq + 1.0) / 2.0);

    std::vector<double> ts = {0.0, boundary, t0};
    for (double t : times) ts.push_back(std::abs(t));
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

    double lam_inner = INFINITY;
    double lam_outer = INFINITY;
    for (const double t : ts) {
      if (t > t0) continue;
      const double mod = nonlinear_pairing_modulus(spec.at_time(t), powers);
      if (t <= boundary) {
        const double r = mod / inner_bound;
        report.samples.push_back({lambda, t, mod, PairingRegime::Inner, r});
        lam_inner = std::min(lam_inner, r);
        ++inner.count;
      }
      if (t >= boundary) {
        const double r = mod / outer_bound;
        report.samples.push_back({lambda, t, mod, PairingRegime::Outer, r});
        lam_outer = std::min(lam_outer, r);
        ++outer.count;
      }
    }
    auto fold = [](Running& run, double lam_min) {
      if (!std::isfinite(lam_min)) return;
      run.inf = std::min(run.inf, lam_min);
      if (std::isnan(run.first)) run.first = run.inf;
      run.per_min = std::min(run.per_min, lam_min);
      run.per_max = std::max(run.per_max, lam_min);
    };
    fold(inner, lam_inner);
    fold(outer, lam_outer);
  }

  auto summarize = [](const Running& run) {
    PairingRegimeSummary s;
    s.samples = run.count;
    if (run.count == 0) return s;
    s.constant = run.inf;
    s.per_lambda_min = run.per_min;
    s.per_lambda_max = run.per_max;
    s.running_spread = run.first > 0.0 ? (run.first - run.inf) / run.first : INFINITY;
    return s;
  };
  report.inner = summarize(inner);
  report.outer = summarize(outer);
  return report;
}

void write_pairing_csv(std::ostream& os, const PairingBoundReport& report) {
  os << "lambda,t,abs_pairing,bound_regime,ratio\n";
  char buf[256];
  for (const auto& s : report.samples) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%s,%.17g\n", s.lambda, s.t,
                  s.abs_pairing, s.regime == PairingRegime::Inner ? "inner" : "outer",
                  s.ratio);
    os << buf;
  }
}

}  // namespace wpk
