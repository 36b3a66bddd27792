#pragma once

// Discrete wave packet transform
//   W_g f(x, xi) = \int conj(g(y - x)) f(y) e^{-i y xi} dy     (no 2 pi prefactor)
// with its adjoint, two-window inversion, the Plancherel identity and the
// pointwise window-change bound.

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wpk/grid_field.hpp"
#include "wpk/kernels.hpp"
#include "wpk/window.hpp"
#include "wpk/windows.hpp"

namespace wpk {

/// W f sampled on x_samples x xi_samples, values row-major in x.
struct WPTSlice {
  std::vector<double> x;
  std::vector<double> xi;
  std::vector<cplx> values;
  std::string window_label;
  double lambda = 1.0;
  // set when x and xi are the full position and dual lattices of `grid`
  std::optional<Grid> grid;

  cplx at(std::size_t i, std::size_t k) const { return values[i * xi.size() + k]; }
  bool full_lattice() const { return grid.has_value(); }
};

/// Direct quadrature at arbitrary (x, xi). Dirac inputs use the closed form
/// conj(w(y0 - x)) e^{-i y0 xi}. Throws FrequencyRangeError for |xi| > Nyquist.
WPTSlice wpt(const Field& f, const Window& w, std::span<const double> xs,
             std::span<const double> xis, Exec exec = Exec::Parallel);

/// Full phase-space lattice, window wrapped periodically.
WPTSlice wpt_full(const Field& f, const Window& w, Exec exec = Exec::Parallel);

/// W f(coord(m) + offset, xi) for every lattice index m.
std::vector<cplx> wpt_lattice_x(const Field& f, const Window& w, double xi,
                                double offset = 0.0);

/// (2 pi)^{-1} \iint w(x - y) F(y, xi) e^{i x xi} dy dxi on a full-lattice slice.
Field adjoint_wpt(const WPTSlice& F, const Window& w);

/// f = W*_synthesis[W_analysis f] / (synthesis, analysis).
/// Throws DegenerateInputError if |(synthesis, analysis)| < 1e-12.
Field reconstruct(const WPTSlice& F, const Window& synthesis, const Window& analysis);

/// ||W_w f||_{L^2(R^2)} / ((2 pi)^{1/2} ||w|| ||f||).
double plancherel_ratio(const Field& f, const Window& w);
double plancherel_ratio(const Field& f, const Field& window);

struct BoundCheckReport {
  double max_violation = 0.0;   // max over the lattice of lhs - rhs
  double max_lhs = 0.0;
  double pairing_abs = 0.0;     // |(a, nb)|
  double tolerance = 0.0;
  std::size_t violations = 0;   // points with lhs - rhs > tolerance
  std::size_t points = 0;
  bool passed() const { return violations == 0; }
};

/// Pointwise |W_a f| <= (2 pi)^{-1} |(a, nb)|^{-1} (|W_a a| * |W_nb f|) on the
/// full phase-space lattice; the convolution runs over both x and xi.
BoundCheckReport window_change_bound_check(const Field& f, const Field& a, const Field& nb,
                                           double tolerance = 1e-6);

struct ConjugationReport {
  double max_deviation = 0.0;
  double u_norm = 0.0;
  double tolerance = 0.0;
  bool passed() const { return max_deviation <= tolerance; }
};

/// max |W_{phi^{(t)}}[conj u](x, xi) - conj(W_{phi^{(-t)}} u(x, -xi))| over
/// `samples` x `samples` lattice points; tolerance 1e-10 ||u||.
ConjugationReport conjugation_identity_check(const Field& u, const WindowSpec& spec,
                                             std::size_t samples = 64);

/// CSV x,xi,re,im with a `# window` / `# lambda` header.
void write_slice_csv(std::ostream& os, const WPTSlice& slice);
/// gnuplot `splot ... with pm3d` blocks: "x xi |W|" rows, blank line per x.
void write_slice_matrix(std::ostream& os, const WPTSlice& slice);
WPTSlice read_slice_csv(std::istream& is);

}  // namespace wpk
