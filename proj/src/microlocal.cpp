#include "wpk/microlocal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "wpk/error.hpp"
#include "wpk/io.hpp"
#include "wpk/wavepacket.hpp"

namespace wpk {
namespace {

constexpr double kFloor = 1e-20;
constexpr double kCoverage = 1e-12;

// Integral over V of |W f(x_J + tau lambda xi ... )|^2 on the global lattice
// x_J = -L + J dx (J may leave [0, N) once shifted).
struct Density {
  std::ptrdiff_t j0 = 0;
  std::vector<double> d;
  double edge = 0.0;  // largest |W|^2 at the ends of the computed y range
  double peak = 0.0;
};

std::vector<double> trapezoid_weights(const std::vector<double>& xis) {
  std::vector<double> w(xis.size(), 0.0);
  for (std::size_t k = 0; k + 1 < xis.size(); ++k) {
    const double h = std::abs(xis[k + 1] - xis[k]);
    w[k] += h / 2;
    w[k + 1] += h / 2;
  }
  return w;
}

// y = x + tau * lambda * xi.
Density density(const Field& f, const Window& w, double lambda, const std::vector<double>& xis,
                const std::vector<double>& weights, double tau) {
  const Grid& g = f.grid();
  const auto n = static_cast<std::ptrdiff_t>(g.points_per_axis());
  const double dx = g.spacing();
  std::vector<std::ptrdiff_t> kshift(xis.size());
  std::vector<double> off(xis.size());
  for (std::size_t k = 0; k < xis.size(); ++k) {
    const double shift = tau * lambda * xis[k];
    kshift[k] = static_cast<std::ptrdiff_t>(std::llround(shift / dx));
    off[k] = shift - static_cast<double>(kshift[k]) * dx;
  }
  const auto [kmin, kmax] = std::minmax_element(kshift.begin(), kshift.end());
  Density out;
  out.j0 = -*kmax;
  out.d.assign(static_cast<std::size_t>(n + *kmax - *kmin), 0.0);
  for (std::size_t k = 0; k < xis.size(); ++k) {
    const auto vals = wpt_lattice_x(f, w, lambda * xis[k], off[k]);
    for (std::ptrdiff_t m = 0; m < n; ++m) {
      const double a = std::norm(vals[static_cast<std::size_t>(m)]);
      out.d[static_cast<std::size_t>(m - kshift[k] - out.j0)] += weights[k] * a;
      out.peak = std::max(out.peak, a);
    }
    out.edge = std::max({out.edge, std::norm(vals.front()), std::norm(vals.back())});
  }
  return out;
}

double k_norm(const Density& dens, const Grid& g, double lo, double hi) {
  const double dx = g.spacing();
  double acc = 0.0;
  for (std::size_t i = 0; i < dens.d.size(); ++i) {
    const double x = -g.half_width() + dx * static_cast<double>(static_cast<std::ptrdiff_t>(i) + dens.j0);
    if (x >= lo - 1e-12 && x <= hi + 1e-12) acc += dens.d[i];
  }
  return acc * dx;
}

template <class Fn>
void parallel_over(std::size_t count, Fn&& fn) {
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(count); ++j) {
    try {
      fn(static_cast<std::size_t>(j));
    } catch (...) {
#pragma omp critical(wpk_microlocal_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

void finish_curve(CriterionCurve& c, double margin, int window_len) {
  c.cum_integral.assign(c.lambdas.size(), 0.0);
  for (std::size_t j = 1; j < c.lambdas.size(); ++j)
    c.cum_integral[j] = c.cum_integral[j - 1] +
                        0.5 * (c.lambdas[j] - c.lambdas[j - 1]) * (c.integrand[j] + c.integrand[j - 1]);
  const VerdictFit fit = verdict_fit(c.lambdas, c.integrand, margin, window_len, c.raw_norm2);
  c.tail_slope = fit.tail_slope;
  c.verdict = fit.verdict;
  c.partial_integral = fit.partial_integral;
  c.margin = margin;
  c.window_len = window_len;
  if (!fit.diagnostic.empty()) c.diagnostics.push_back(fit.diagnostic);
}

void require_1d(const Field& f, const char* op) {
  if (f.grid().dim() != 1) throw SizingError(std::string(op) + ": detectors are implemented for n = 1");
}

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Convergent: return "Convergent";
    case Verdict::Divergent: return "Divergent";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

Verdict parse_verdict(const std::string& s) {
  if (s == "Convergent") return Verdict::Convergent;
  if (s == "Divergent") return Verdict::Divergent;
  return Verdict::Inconclusive;
}

void CriterionParams::validate() const {
  if (!std::isfinite(s)) throw ParameterError("Sobolev index must be finite");
  if (!(b > 0.0 && b < 1.0)) throw ParameterError("b must lie in (0, 1)");
  if (!(lambda_ratio > 1.0)) throw ParameterError("lambda ratio must exceed 1");
  if (!(nyquist_fraction > 0.0 && nyquist_fraction <= 0.8)) {
    throw ParameterError("nyquist_fraction must lie in (0, 0.8]");
  }
  if (!(k_halfwidth > 0.0)) throw ParameterError("K half-width must be positive");
  if (v_halfwidth < 0.0) throw ParameterError("V half-width must be nonnegative");
  if (v_points < 2) throw ParameterError("V needs at least two samples");
  if (!(margin > 0.0 && margin < 1.0)) throw ParameterError("margin must lie in (0, 1)");
  if (window_len < 2) throw ParameterError("window_len must be >= 2");
  if (!(t0 >= 0.0) || !std::isfinite(t0)) throw ParameterError("t0 must be finite and >= 0");
  if (direction_sign != 1 && direction_sign != -1) throw ParameterError("direction sign must be +1 or -1");
  if (z_pitch < 0.0) throw ParameterError("z pitch must be nonnegative");
}

VerdictFit verdict_fit(const std::vector<double>& lambdas, const std::vector<double>& g,
                       double margin, int window_len, const std::vector<double>& raw) {
  if (lambdas.size() != g.size()) throw SizingError("verdict_fit: lambda and integrand lengths differ");
  VerdictFit fit;
  for (std::size_t j = 1; j < g.size(); ++j)
    fit.partial_integral += 0.5 * (lambdas[j] - lambdas[j - 1]) * (g[j] + g[j - 1]);
  if (lambdas.empty()) {
    fit.diagnostic = "empty lambda grid (Nyquist ceiling below lambda = 1)";
    return fit;
  }
  const std::vector<double>& base = raw.empty() ? g : raw;
  const double peak = *std::max_element(base.begin(), base.end());
  if (peak <= 0.0) {
    fit.verdict = Verdict::Convergent;
    fit.diagnostic = "integrand identically zero";
    return fit;
  }
  for (std::size_t j = 0; j < base.size(); ++j) {
    if (base[j] <= kFloor * peak) {
      fit.verdict = Verdict::Convergent;
      fit.diagnostic = fmt("transform decayed below 1e-20 of its peak at lambda = %.4g", lambdas[j]);
      return fit;
    }
  }
  const double lmax = lambdas.back();
  if (lmax < 10.0 * lambdas.front() * (1.0 - 1e-12)) {
    fit.diagnostic = fmt("lambda range [1, %.3g] spans less than a decade (Nyquist ceiling)", lmax);
    return fit;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (std::size_t j = 0; j < lambdas.size(); ++j) {
    if (lambdas[j] < lmax / 10.0 * (1.0 - 1e-12)) continue;
    const double lx = std::log(lambdas[j]);
    const double ly = std::log(g[j]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++count;
  }
  if (count < window_len) {
    fit.diagnostic = "fewer than window_len points in the top decade";
    return fit;
  }
  fit.tail_slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  if (fit.tail_slope < -1.0 - margin) fit.verdict = Verdict::Convergent;
  else if (fit.tail_slope > -1.0 + margin) fit.verdict = Verdict::Divergent;
  else fit.diagnostic = fmt("tail slope %.3f within %.2f of the critical slope -1", fit.tail_slope, margin);
  return fit;
}

CriterionCurve reweight_curve(const CriterionCurve& curve, double s) {
  CriterionCurve c = curve;
  c.s = s;
  c.diagnostics.clear();
  for (std::size_t j = 0; j < c.lambdas.size(); ++j)
    c.integrand[j] = std::pow(c.lambdas[j], 2.0 * s) * c.raw_norm2[j];
  finish_curve(c, curve.margin, curve.window_len);
  return c;
}

std::vector<double> lambda_grid(const Grid& grid, const CriterionParams& params, double sup_v) {
  const double lmax = params.nyquist_fraction * grid.nyquist() / sup_v;
  std::vector<double> out;
  for (int j = 0;; ++j) {
    const double l = std::pow(params.lambda_ratio, j);
    if (l > lmax * (1.0 + 1e-12)) break;
    out.push_back(l);
  }
  return out;
}

std::vector<double> v_samples(const CriterionParams& params, double xi0, int sign) {
  if (xi0 == 0.0) throw ParameterError("xi0 must be nonzero");
  const double w = params.v_width(xi0);
  if (!(w < std::abs(xi0))) throw ParameterError("V must stay away from the origin");
  std::vector<double> out(static_cast<std::size_t>(params.v_points));
  for (int k = 0; k < params.v_points; ++k)
    out[static_cast<std::size_t>(k)] = sign * (xi0 - w + 2.0 * w * k / (params.v_points - 1));
  return out;
}

CriterionCurve cone_fourier_detect(const Field& f, const PhasePoint& pt, double s,
                                   double cutoff_width, double cone_halfangle,
                                   double nyquist_fraction, double margin, int window_len) {
  require_1d(f, "cone_fourier_detect");
  if (pt.xi0 == 0.0) throw ParameterError("xi0 must be nonzero");
  if (!(cutoff_width > 0.0)) throw ParameterError("cutoff width must be positive");
  if (!(cone_halfangle > 0.0 && cone_halfangle < std::numbers::pi / 2)) {
    throw ParameterError("cone half-angle must lie in (0, pi/2)");
  }
  if (!(nyquist_fraction > 0.0 && nyquist_fraction <= 0.8)) {
    throw ParameterError("nyquist_fraction must lie in (0, 0.8]");
  }
  const Grid& g = f.grid();
  const std::size_t n = g.points_per_axis();
  const double cap = nyquist_fraction * g.nyquist();
  if (cap < 2.0) {
    throw FrequencyRangeError("cone shells need frequencies up to 2; cap is " + std::to_string(cap));
  }
  auto chi = [&](double x) {
    const double r = (x - pt.x0) / cutoff_width;
    return std::abs(r) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - r * r)) : 0.0;
  };

  std::vector<cplx> F(n);
  if (f.is_delta()) {
    const double y0 = f.delta_center()[0];
    const double c = chi(y0) / std::sqrt(2.0 * std::numbers::pi);
    for (std::size_t k = 0; k < n; ++k) F[k] = c * std::polar(1.0, -y0 * g.freq(k));
  } else {
    std::vector<cplx> cut(f.samples().begin(), f.samples().end());
    for (std::size_t j = 0; j < n; ++j) cut[j] *= chi(g.coord(j));
    const Field spec = fourier(Field::sampled(g, std::move(cut)));
    std::copy(spec.samples().begin(), spec.samples().end(), F.begin());
  }

  CriterionCurve c;
  c.label = fmt("cone(x0=%g,xi0=%g)", pt.x0, pt.xi0);
  c.s = s;
  const double sign = pt.xi0 > 0 ? 1.0 : -1.0;
  for (int k = 0; std::ldexp(1.0, k + 1) <= cap; ++k) {
    const double lo = std::ldexp(1.0, k);
    const double hi = 2.0 * lo;
    double m = 0.0;
    double raw = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double xi = sign * g.freq(i);
      if (xi < lo || xi >= hi) continue;
      const double a = std::norm(F[i]);
      raw += a;
      m += std::pow(1.0 + xi * xi, s) * a;
    }
    c.lambdas.push_back(lo);
    c.integrand.push_back(m * g.freq_spacing() / lo);
    c.raw_norm2.push_back(raw * g.freq_spacing() / lo);
  }
  finish_curve(c, margin, window_len);
  return c;
}

std::vector<CriterionCurve> wavepacket_detect_tiles(const Field& f, double xi0,
                                                    const std::vector<double>& centres,
                                                    const CriterionParams& params,
                                                    const WindowShape& shape) {
  require_1d(f, "wavepacket_detect");
  params.validate();
  const Grid& g = f.grid();
  const auto xis = v_samples(params, xi0);
  const auto weights = trapezoid_weights(xis);
  double sup_v = 0.0;
  for (double v : xis) sup_v = std::max(sup_v, std::abs(v));
  const auto lambdas = lambda_grid(g, params, sup_v);
  const double h = params.k_halfwidth;

  std::vector<std::vector<double>> norms(lambdas.size(), std::vector<double>(centres.size()));
  parallel_over(lambdas.size(), [&](std::size_t j) {
    const Window w = Window::dilated(shape, params.b, lambdas[j]);
    const Density d = density(f, w, lambdas[j], xis, weights, 0.0);
    for (std::size_t z = 0; z < centres.size(); ++z)
      norms[j][z] = k_norm(d, g, centres[z] - h, centres[z] + h);
  });

  std::vector<CriterionCurve> out(centres.size());
  for (std::size_t z = 0; z < centres.size(); ++z) {
    CriterionCurve& c = out[z];
    c.label = "wavepacket(window=" + shape.name + fmt(",K=[%g,%g]", centres[z] - h, centres[z] + h) +
              fmt(",xi0=%g)", xi0);
    c.s = params.s;
    c.lambdas = lambdas;
    for (std::size_t j = 0; j < lambdas.size(); ++j) {
      c.raw_norm2.push_back(norms[j][z]);
      c.integrand.push_back(std::pow(lambdas[j], 2.0 * params.s) * norms[j][z]);
    }
    finish_curve(c, params.margin, params.window_len);
  }
  return out;
}

CriterionCurve wavepacket_detect(const Field& f, const PhasePoint& pt, const CriterionParams& params,
                                 const WindowShape& shape) {
  return wavepacket_detect_tiles(f, pt.xi0, {pt.x0}, params, shape).front();
}

CriterionCurve transported_criterion(const Field& u0, double xi0, const CriterionParams& params) {
  require_1d(u0, "transported_criterion");
  params.validate();
  const Grid& g = u0.grid();
  const int sign = params.direction_sign;
  const double tau = -sign * params.t0;
  const auto xis = v_samples(params, xi0, sign);
  const auto weights = trapezoid_weights(xis);
  double sup_v = 0.0;
  for (double v : xis) sup_v = std::max(sup_v, std::abs(v));
  const auto lambdas = lambda_grid(g, params, sup_v);
  const double dx = g.spacing();
  const double delta = params.k_halfwidth;
  const auto half = static_cast<std::ptrdiff_t>(std::floor(delta / dx + 1e-9));
  const double pitch = params.z_pitch > 0.0 ? params.z_pitch : delta / 2.0;
  const auto step = std::max<std::ptrdiff_t>(1, std::llround(pitch / dx));

  CriterionCurve c;
  c.label = fmt("transported(condition %g,t0=%g", sign > 0 ? 2.0 : 3.0, params.t0) + fmt(",xi0=%g)", xi0);
  c.s = params.s;
  c.lambdas = lambdas;
  c.raw_norm2.assign(lambdas.size(), 0.0);
  c.argmax_z.assign(lambdas.size(), 0.0);
  std::vector<double> edge_ratio(lambdas.size(), 0.0);

  parallel_over(lambdas.size(), [&](std::size_t j) {
    const Window w = Window::gaussian({params.b, lambdas[j], tau, 1});
    const Density d = density(u0, w, lambdas[j], xis, weights, tau);
    std::vector<double> prefix(d.d.size() + 1, 0.0);
    for (std::size_t i = 0; i < d.d.size(); ++i) prefix[i + 1] = prefix[i] + d.d[i];
    const auto len = static_cast<std::ptrdiff_t>(d.d.size());
    double best = 0.0;
    std::ptrdiff_t best_i = 0;
    for (std::ptrdiff_t i = 0; i < len; i += step) {
      const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - half);
      const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(len, i + half + 1);
      const double v = (prefix[static_cast<std::size_t>(hi)] - prefix[static_cast<std::size_t>(lo)]) * dx;
      if (v > best) {
        best = v;
        best_i = i;
      }
    }
    c.raw_norm2[j] = best;
    c.argmax_z[j] = -g.half_width() + dx * static_cast<double>(best_i + d.j0);
    edge_ratio[j] = d.peak > 0.0 ? d.edge / d.peak : 0.0;
  });

  // lambdas whose transform sits at the roundoff floor cannot lose coverage
  const double top = *std::max_element(c.raw_norm2.begin(), c.raw_norm2.end());
  double worst_edge = 0.0;
  for (std::size_t j = 0; j < lambdas.size(); ++j) {
    c.integrand.push_back(std::pow(lambdas[j], 2.0 * params.s) * c.raw_norm2[j]);
    if (c.raw_norm2[j] > kFloor * top) worst_edge = std::max(worst_edge, edge_ratio[j]);
  }
  if (worst_edge > kCoverage) {
    c.diagnostics.push_back(
        fmt("coverage warning: transform reaches %.2e of its peak at the domain edge", worst_edge));
  }
  finish_curve(c, params.margin, params.window_len);
  return c;
}

Theorem2Report theorem2_experiment(const Field& u0, const Theorem2Config& cfg) {
  require_1d(u0, "theorem2_experiment");
  require_sampled(u0, "theorem2_experiment");
  cfg.powers.validate();
  const double n = 1.0;
  if (!(cfg.s > n / 2)) throw ParameterError("s must exceed n/2");
  if (!(cfg.r > cfg.s && cfg.r < 2 * cfg.s - n / 2)) {
    throw ParameterError(fmt("r = %g must lie in (s, 2s - n/2) = (%g, ", cfg.r, cfg.s) +
                         fmt("%g)", 2 * cfg.s - n / 2));
  }
  WindowSpec{cfg.b, 1.0, 0.0, 1}.validate_theorem();
  if (!(cfg.t0 > 0.0)) throw ParameterError("t0 must be positive");
  if (cfg.steps < 1) throw ParameterError("steps must be >= 1");

  Theorem2Report rep;
  CriterionParams p = cfg.detector;
  p.s = cfg.r;
  p.b = cfg.b;
  p.t0 = cfg.t0;

  rep.b_inequality_lhs = 2 * cfg.r + n - 1 - 4 * cfg.s + cfg.b * (4 * cfg.s + n);
  rep.b_inequality_holds = rep.b_inequality_lhs < -1.0;

  if (cfg.powers.p == 0) {
    rep.condition2_skip = "skipped: p = 0 (nonlinearity is conj(u)^q)";
  } else {
    p.direction_sign = +1;
    rep.condition2 = transported_criterion(u0, cfg.xi0, p);
  }
  if (cfg.powers.q == 0) {
    rep.condition3_skip = "skipped: q = 0 (nonlinearity is u^p)";
  } else {
    p.direction_sign = -1;
    rep.condition3 = transported_criterion(u0, cfg.xi0, p);
  }
  rep.hypotheses_convergent =
      (!rep.condition2 || rep.condition2->verdict == Verdict::Convergent) &&
      (!rep.condition3 || rep.condition3->verdict == Verdict::Convergent);

  SolveOptions opts;
  opts.scheme = cfg.scheme;
  opts.store_every = cfg.steps;
  rep.trajectory = nls_solve(u0, cfg.powers, cfg.t0, cfg.steps, opts);
  if (rep.trajectory.blowup) throw NumericalError("solver aborted: " + *rep.trajectory.blowup);
  const Field& ut = rep.trajectory.final_state();

  const Grid& g = ut.grid();
  const double peak = max_abs(ut);
  double lo = g.half_width();
  double hi = -g.half_width();
  for (std::size_t j = 0; j < g.points_per_axis(); ++j) {
    if (std::abs(ut[j]) > cfg.tile_threshold * peak) {
      lo = std::min(lo, g.coord(j));
      hi = std::max(hi, g.coord(j));
    }
  }
  const double h = p.k_halfwidth;
  for (double z = lo + h; z - h <= hi; z += 2 * h) rep.tile_centres.push_back(z);
  p.direction_sign = +1;
  p.t0 = 0.0;
  rep.conclusions = wavepacket_detect_tiles(ut, cfg.xi0, rep.tile_centres, p);
  for (const auto& c : rep.conclusions)
    if (c.verdict == Verdict::Divergent) rep.any_conclusion_divergent = true;
  rep.implication_held = !(rep.hypotheses_convergent && rep.any_conclusion_divergent);
  return rep;
}

void write_curve_csv(std::ostream& os, const CriterionCurve& c) {
  os << "lambda,integrand,cum_integral\n";
  char buf[128];
  for (std::size_t j = 0; j < c.lambdas.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", c.lambdas[j], c.integrand[j],
                  j < c.cum_integral.size() ? c.cum_integral[j] : 0.0);
    os << buf;
  }
}

CriterionCurve read_curve_csv(std::istream& is) {
  CriterionCurve c;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("lambda", 0) == 0) continue;
    std::istringstream ss(line);
    std::string a, b, d;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, d)) {
      throw IoError("malformed curve row: " + line);
    }
    try {
      c.lambdas.push_back(std::stod(a));
      c.integrand.push_back(std::stod(b));
      c.cum_integral.push_back(std::stod(d));
    } catch (const std::exception&) {
      throw IoError("malformed curve row: " + line);
    }
  }
  return c;
}

void write_curve_summary(std::ostream& os, const CriterionCurve& c) {
  KeyValues kv;
  kv.set("label", c.label);
  kv.set("s", c.s);
  kv.set("points", static_cast<long long>(c.lambdas.size()));
  kv.set("lambda_max", c.lambdas.empty() ? 0.0 : c.lambdas.back());
  kv.set("tail_slope", c.tail_slope);
  kv.set("verdict", to_string(c.verdict));
  kv.set("margin", c.margin);
  kv.set("window_len", c.window_len);
  kv.set("partial_integral", c.partial_integral);
  for (std::size_t k = 0; k < c.diagnostics.size(); ++k) kv.set("diagnostic." + std::to_string(k), c.diagnostics[k]);
  kv.write(os);
}

}  // namespace wpk
