#include "wpk/wavepacket.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "wpk/error.hpp"
#include "wpk/fft.hpp"

namespace wpk {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_1d(const Field& f, const char* op) {
  if (f.grid().dim() != 1) {
    throw SizingError(std::string(op) + ": wave packet transforms are implemented for n = 1");
  }
}

void check_frequencies(const Grid& grid, std::span<const double> xis) {
  const double nyq = grid.nyquist();
  for (double xi : xis) {
    if (!(std::abs(xi) <= nyq * (1.0 + 1e-12))) {
      throw FrequencyRangeError("frequency " + std::to_string(xi) + " beyond Nyquist " +
                                std::to_string(nyq));
    }
  }
}

inline double lattice_sign(std::size_t c) { return (c & 1U) ? -1.0 : 1.0; }

}  // namespace

WPTSlice wpt(const Field& f, const Window& w, std::span<const double> xs,
             std::span<const double> xis, Exec exec) {
  require_1d(f, "wpt");
  check_frequencies(f.grid(), xis);
  w.check_resolution(f.grid());

  WPTSlice slice;
  slice.x.assign(xs.begin(), xs.end());
  slice.xi.assign(xis.begin(), xis.end());
  slice.window_label = w.label();
  slice.values.assign(xs.size() * xis.size(), cplx(0.0));

  if (f.is_delta()) {
    const double y0 = f.delta_center()[0];
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t k = 0; k < xis.size(); ++k)
        slice.values[i * xis.size() + k] = std::conj(w(y0 - xs[i])) * std::polar(1.0, -y0 * xis[k]);
    return slice;
  }
  if (exec == Exec::Serial) {
    kernels::windowed_sums_serial(f.grid(), f.samples(), w, xs, xis, slice.values);
  } else {
    kernels::windowed_sums_parallel(f.grid(), f.samples(), w, xs, xis, slice.values);
  }
  return slice;
}

WPTSlice wpt_full(const Field& f, const Window& w, Exec exec) {
  require_1d(f, "wpt_full");
  require_sampled(f, "wpt_full");
  w.check_resolution(f.grid());
  const Grid& g = f.grid();
  const std::size_t n = g.points_per_axis();
  WPTSlice slice;
  slice.x = g.coords();
  slice.xi = g.freqs();
  slice.window_label = w.label();
  slice.grid = g;
  slice.values.assign(n * n, cplx(0.0));
  if (exec == Exec::Serial) {
    kernels::lattice_wpt_serial(g, f.samples(), w, slice.values);
  } else {
    kernels::lattice_wpt_parallel(g, f.samples(), w, slice.values);
  }
  return slice;
}

std::vector<cplx> wpt_lattice_x(const Field& f, const Window& w, double xi, double offset) {
  require_1d(f, "wpt_lattice_x");
  const double xis[1] = {xi};
  check_frequencies(f.grid(), xis);
  w.check_resolution(f.grid());
  const Grid& g = f.grid();
  std::vector<cplx> out(g.points_per_axis());
  if (f.is_delta()) {
    const double y0 = f.delta_center()[0];
    const cplx phase = std::polar(1.0, -y0 * xi);
    for (std::size_t m = 0; m < out.size(); ++m) out[m] = std::conj(w(y0 - g.coord(m) - offset)) * phase;
    return out;
  }
  kernels::correlation_wpt(g, f.samples(), w, xi, offset, out);
  return out;
}

Field adjoint_wpt(const WPTSlice& F, const Window& w) {
  if (!F.full_lattice()) {
    throw UnsupportedInputError("adjoint_wpt needs the full phase-space lattice");
  }
  const Grid& g = *F.grid;
  const std::size_t n = g.points_per_axis();
  if (F.values.size() != n * n) throw SizingError("slice does not match its grid");

  // H[i][m] = sum_c F(y_i, xi_c) e^{i x_m xi_c} dxi
  std::vector<cplx> h(n * n);
  const double dxi = g.freq_spacing();
#pragma omp parallel
  {
    std::vector<cplx> buf(n);
#pragma omp for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
      const auto i = static_cast<std::size_t>(ii);
      for (std::size_t c = 0; c < n; ++c) buf[(c + n / 2) % n] = lattice_sign(c) * F.values[i * n + c];
      fft::transform_1d(buf, fft::Direction::Backward);
      for (std::size_t m = 0; m < n; ++m) h[i * n + m] = dxi * buf[m];
    }
  }

  std::vector<cplx> wv(n);
  for (std::size_t k = 0; k < n; ++k)
    wv[k] = w.periodic(g, static_cast<std::ptrdiff_t>(k) - static_cast<std::ptrdiff_t>(n / 2));

  std::vector<cplx> out(n);
  const double scale = g.spacing() / kTwoPi;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t mm = 0; mm < static_cast<std::ptrdiff_t>(n); ++mm) {
    const auto m = static_cast<std::size_t>(mm);
    cplx acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += wv[(m + n + n / 2 - i) % n] * h[i * n + m];
    out[m] = acc * scale;
  }
  return Field::sampled(g, std::move(out));
}

Field reconstruct(const WPTSlice& F, const Window& synthesis, const Window& analysis) {
  if (!F.full_lattice()) {
    throw UnsupportedInputError("reconstruct needs the full phase-space lattice");
  }
  const Grid& g = *F.grid;
  const cplx pairing = inner_product(synthesis.on_grid(g), analysis.on_grid(g));
  if (std::abs(pairing) < 1e-12) {
    throw DegenerateInputError("reconstruction windows are orthogonal: |(psi, phi)| = " +
                               std::to_string(std::abs(pairing)));
  }
  return adjoint_wpt(F, synthesis) * (1.0 / pairing);
}

double plancherel_ratio(const Field& f, const Window& w) {
  require_1d(f, "plancherel_ratio");
  require_sampled(f, "plancherel_ratio");
  const Grid& g = f.grid();
  const double fn = l2_norm(f);
  const double wn = l2_norm(w.on_grid(g));
  if (fn == 0.0 || wn == 0.0) {
    throw DegenerateInputError("plancherel_ratio: zero-norm input");
  }
  const WPTSlice full = wpt_full(f, w);
  double acc = 0.0;
  for (const cplx& v : full.values) acc += std::norm(v);
  const double wnorm = std::sqrt(acc * g.spacing() * g.freq_spacing());
  return wnorm / (std::sqrt(kTwoPi) * wn * fn);
}

double plancherel_ratio(const Field& f, const Field& window) {
  return plancherel_ratio(f, Window::sampled(window));
}

BoundCheckReport window_change_bound_check(const Field& f, const Field& a, const Field& nb,
                                           double tolerance) {
  require_1d(f, "window_change_bound_check");
  require_same_grid(f, a, "window_change_bound_check");
  require_same_grid(f, nb, "window_change_bound_check");
  const Grid& g = f.grid();
  const std::size_t n = g.points_per_axis();

  BoundCheckReport report;
  report.tolerance = tolerance;
  report.pairing_abs = std::abs(inner_product(a, nb));
  if (report.pairing_abs < 1e-12) {
    throw DegenerateInputError("window-change bound: |(a, nb)| below 1e-12");
  }
  const Window wa = Window::sampled(a);
  const Window wnb = Window::sampled(nb);
  const WPTSlice lhs = wpt_full(f, wa);
  const WPTSlice waa = wpt_full(a, wa);
  const WPTSlice wnf = wpt_full(f, wnb);

  // |W_a a| re-indexed by lattice displacement: entry (d, e) holds the value
  // at (d dx, e dxi) with d, e taken mod N.
  std::vector<double> kernel(n * n);
  std::vector<double> mag(n * n);
  for (std::size_t d = 0; d < n; ++d)
    for (std::size_t e = 0; e < n; ++e)
      kernel[d * n + e] = std::abs(waa.values[((d + n / 2) % n) * n + (e + n / 2) % n]);
  for (std::size_t k = 0; k < n * n; ++k) mag[k] = std::abs(wnf.values[k]);

  std::vector<double> conv(n * n);
  kernels::cyclic_convolve_fft(n, kernel, mag, conv);
  const double scale = g.spacing() * g.freq_spacing() / (kTwoPi * report.pairing_abs);

  report.max_violation = -INFINITY;
  for (std::size_t k = 0; k < n * n; ++k) {
    const double l = std::abs(lhs.values[k]);
    const double r = conv[k] * scale;
    report.max_lhs = std::max(report.max_lhs, l);
    report.max_violation = std::max(report.max_violation, l - r);
    if (l - r > tolerance) ++report.violations;
  }
  report.points = n * n;
  return report;
}

ConjugationReport conjugation_identity_check(const Field& u, const WindowSpec& spec,
                                             std::size_t samples) {
  require_1d(u, "conjugation_identity_check");
  require_sampled(u, "conjugation_identity_check");
  const Grid& g = u.grid();
  const std::size_t n = g.points_per_axis();
  const std::size_t stride = std::max<std::size_t>(1, n / std::max<std::size_t>(1, samples));

  std::vector<double> xs;
  std::vector<double> xis;
  std::vector<double> neg_xis;
  for (std::size_t i = 0; i < n; i += stride) xs.push_back(g.coord(i));
  for (std::size_t k = 0; k < n; k += stride) {
    xis.push_back(g.freq(k));
    neg_xis.push_back(-g.freq(k));
  }
  const WPTSlice lhs = wpt(u.conj(), Window::gaussian(spec), xs, xis);
  const WPTSlice rhs = wpt(u, Window::gaussian(spec.at_time(-spec.t)), xs, neg_xis);

  ConjugationReport report;
  report.u_norm = l2_norm(u);
  report.tolerance = 1e-10 * report.u_norm;
  for (std::size_t k = 0; k < lhs.values.size(); ++k) {
    report.max_deviation =
        std::max(report.max_deviation, std::abs(lhs.values[k] - std::conj(rhs.values[k])));
  }
  return report;
}

void write_slice_csv(std::ostream& os, const WPTSlice& slice) {
  os << "# window " << slice.window_label << "\n";
  char buf[160];
  std::snprintf(buf, sizeof buf, "# lambda %.17g\n", slice.lambda);
  os << buf << "x,xi,re,im\n";
  for (std::size_t i = 0; i < slice.x.size(); ++i)
    for (std::size_t k = 0; k < slice.xi.size(); ++k) {
      const cplx v = slice.at(i, k);
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", slice.x[i], slice.xi[k],
                    v.real(), v.imag());
      os << buf;
    }
}

void write_slice_matrix(std::ostream& os, const WPTSlice& slice) {
  os << "# x xi |W|  (window " << slice.window_label << ")\n";
  char buf[128];
  for (std::size_t i = 0; i < slice.x.size(); ++i) {
    for (std::size_t k = 0; k < slice.xi.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%.10g %.10g %.10g\n", slice.x[i], slice.xi[k],
                    std::abs(slice.at(i, k)));
      os << buf;
    }
    os << "\n";
  }
}

WPTSlice read_slice_csv(std::istream& is) {
  WPTSlice slice;
  std::string line;
  std::vector<std::array<double, 4>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.rfind("# window ", 0) == 0) {
      slice.window_label = line.substr(9);
      continue;
    }
    if (line.rfind("# lambda ", 0) == 0) {
      slice.lambda = std::stod(line.substr(9));
      continue;
    }
    if (line[0] == '#' || line.rfind("x,xi", 0) == 0) continue;
    std::array<double, 4> r{};
    std::istringstream ss(line);
    std::string cell;
    for (double& v : r) {
      if (!std::getline(ss, cell, ',')) throw IoError("malformed slice row: " + line);
      v = std::stod(cell);
    }
    rows.push_back(r);
  }
  for (const auto& r : rows) {
    if (slice.x.empty() || slice.x.back() != r[0]) {
      if (std::find(slice.x.begin(), slice.x.end(), r[0]) == slice.x.end()) slice.x.push_back(r[0]);
    }
    if (slice.x.size() == 1) slice.xi.push_back(r[1]);
    slice.values.emplace_back(r[2], r[3]);
  }
  if (slice.values.size() != slice.x.size() * slice.xi.size()) {
    throw IoError("slice CSV is not a full x-by-xi product");
  }
  return slice;
}

}  // namespace wpk
