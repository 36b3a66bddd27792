#pragma once

// H^s wave-front-set detectors.
//
// Cone-Fourier (definition): dyadic shell masses of <xi>^s |F[chi f]| over a
// cone around xi0.  Wave packet (lambda-criterion):
//   g(lambda) = lambda^{2s+n-1} \int_K \int_V |W_{phi_lambda} f(x, lambda xi)|^2 dxi dx.
// A point is outside WF_{H^s} iff \int_1^\infty g dlambda < infinity, decided
// numerically from the log-log tail slope of g against the critical slope -1.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wpk/grid_field.hpp"
#include "wpk/schrodinger.hpp"
#include "wpk/window.hpp"
#include "wpk/windows.hpp"

namespace wpk {

enum class Verdict { Convergent, Divergent, Inconclusive };
const char* to_string(Verdict v);
Verdict parse_verdict(const std::string& s);

struct PhasePoint {
  double x0 = 0.0;
  double xi0 = 1.0;  // nonzero
};

struct CriterionParams {
  double s = 1.0;                      // Sobolev index (s or r)
  double b = 0.25;                     // window scale exponent
  double lambda_ratio = 1.0905077326652577;  // 2^{1/8}
  double nyquist_fraction = 0.2;       // Lambda_max sup|V| <= fraction * Nyquist (<= 0.8)
  double k_halfwidth = 0.5;            // K = [x0 - h, x0 + h], or ball radius delta
  double v_halfwidth = 0.0;            // 0: |xi0| / 4
  int v_points = 17;
  double margin = 0.3;
  int window_len = 4;
  double t0 = 0.0;                     // transport time
  int direction_sign = +1;             // +1: condition (2), -1: condition (3)
  double z_pitch = 0.0;                // 0: delta / 2

  void validate() const;
  double v_width(double xi0) const { return v_halfwidth > 0.0 ? v_halfwidth : std::abs(xi0) / 4.0; }
};

struct CriterionCurve {
  std::string label;
  double s = 0.0;
  std::vector<double> lambdas;
  std::vector<double> integrand;     // g(lambda_j)
  std::vector<double> raw_norm2;     // g / lambda^{2s+n-1}
  std::vector<double> cum_integral;  // trapezoid of g dlambda up to lambda_j
  double tail_slope = NAN;
  double partial_integral = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  double margin = 0.3;
  int window_len = 4;
  std::vector<std::string> diagnostics;
  std::vector<double> argmax_z;      // transported criterion: maximizing ball centre per lambda
};

struct VerdictFit {
  double tail_slope = NAN;
  Verdict verdict = Verdict::Inconclusive;
  double partial_integral = 0.0;
  std::string diagnostic;
};

/// Least-squares slope of log g vs log lambda over the top decade
/// [lambda_max / 10, lambda_max]: Convergent below -1 - margin, Divergent
/// above -1 + margin. When `raw` is given and falls below 1e-20 of its peak,
/// the integrand has hit the roundoff floor and the verdict is Convergent.
VerdictFit verdict_fit(const std::vector<double>& lambdas, const std::vector<double>& g,
                       double margin = 0.3, int window_len = 4,
                       const std::vector<double>& raw = {});

/// Same curve at another Sobolev index: g = lambda^{2s+n-1} raw_norm2, refitted.
CriterionCurve reweight_curve(const CriterionCurve& curve, double s);

/// Geometric grid 1, r, r^2, ... up to nyquist_fraction * Nyquist / sup|V|.
std::vector<double> lambda_grid(const Grid& grid, const CriterionParams& params, double sup_v);

/// Frequencies of V (xi0 +- v_width, v_points samples), multiplied by `sign`.
std::vector<double> v_samples(const CriterionParams& params, double xi0, int sign = +1);

/// Dyadic-shell detector. The cutoff is the bump exp(1 - 1/(1 - ((x - x0)/w)^2)).
/// In n = 1 the cone is the half-line sign(xi0) xi > 0, so cone_halfangle only
/// needs to lie in (0, pi/2). Throws FrequencyRangeError if no shell fits below
/// nyquist_fraction * Nyquist.
CriterionCurve cone_fourier_detect(const Field& f, const PhasePoint& pt, double s,
                                   double cutoff_width = 1.0, double cone_halfangle = 0.5,
                                   double nyquist_fraction = 0.2, double margin = 0.3,
                                   int window_len = 4);

/// Static wave packet detector with a dilated window of the given shape.
CriterionCurve wavepacket_detect(const Field& f, const PhasePoint& pt, const CriterionParams& params,
                                 const WindowShape& shape = gaussian_shape());

/// One curve per K(z) = [z - h, z + h]; the transform is computed once.
std::vector<CriterionCurve> wavepacket_detect_tiles(const Field& f, double xi0,
                                                    const std::vector<double>& centres,
                                                    const CriterionParams& params,
                                                    const WindowShape& shape = gaussian_shape());

/// Transported criterion: sign +1 evaluates
///   lambda^{2s+n-1} sup_z || W_{phi_lambda^{(-t0)}} u0(x - t0 lambda xi, lambda xi) ||^2_{B(z,delta) x V},
/// sign -1 the same with phi^{(+t0)}, x + t0 lambda xi and -V.
CriterionCurve transported_criterion(const Field& u0, double xi0, const CriterionParams& params);

struct Theorem2Config {
  NonlinearityPowers powers{2, 1};
  double t0 = 0.5;
  double xi0 = 1.0;
  double r = 0.9;
  double s = 0.75;
  double b = 0.25;
  int steps = 256;
  StepScheme scheme = StepScheme::Strang;
  CriterionParams detector;  // s, b, t0 and direction are overwritten
  double tile_threshold = 1e-8;  // tiles cover where |u(t0)| > threshold * max|u(t0)|
};

struct Theorem2Report {
  std::optional<CriterionCurve> condition2;  // empty: skipped
  std::optional<CriterionCurve> condition3;
  std::string condition2_skip;
  std::string condition3_skip;
  std::vector<double> tile_centres;
  std::vector<CriterionCurve> conclusions;
  bool hypotheses_convergent = false;
  bool any_conclusion_divergent = false;
  bool implication_held = true;  // !(hypotheses_convergent && any_conclusion_divergent)
  double b_inequality_lhs = 0.0; // 2r + n - 1 - 4s + b(4s + n), compared with -1
  bool b_inequality_holds = false;
  Trajectory trajectory;
};

/// Hypotheses (2), (3) on u0, the solve to t0, and the conclusion curves on
/// u(t0) at level r. Throws ParameterError unless s > n/2, s < r < 2s - n/2
/// and b <= 1/2.
Theorem2Report theorem2_experiment(const Field& u0, const Theorem2Config& config);

/// CSV lambda,integrand,cum_integral.
void write_curve_csv(std::ostream& os, const CriterionCurve& curve);
CriterionCurve read_curve_csv(std::istream& is);
/// key = value sidecar: label, s, tail_slope, verdict, margin, ...
void write_curve_summary(std::ostream& os, const CriterionCurve& curve);

}  // namespace wpk
