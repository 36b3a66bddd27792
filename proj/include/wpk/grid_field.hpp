#pragma once

// Sampled functions on a uniform periodic lattice and the transforms that act
// on them.
//
// Normalization table (the one place these constants are fixed):
//
//   fourier          F[f](xi)  = (2 pi)^{-n/2} \int f(x) e^{-i x.xi} dx
//   inverse_fourier  f(x)      = (2 pi)^{-n/2} \int F(xi) e^{+i x.xi} dxi
//   inner_product    (f, g)    = \int f(x) conj(g(x)) dx
//   wpt              W_g f(x,xi) = \int conj(g(y - x)) f(y) e^{-i y.xi} dy
//   adjoint_wpt      W*_g F(x) = (2 pi)^{-n} \iint g(x - y) F(y,xi) e^{i x.xi} dy dxi
//   plancherel       ||W_g f|| = (2 pi)^{n/2} ||g|| ||f||
//
// All integrals are uniform (trapezoid on the periodic lattice) sums.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace wpk {

using cplx = std::complex<double>;

/// Uniform periodic lattice on [-L, L)^dim with its dual frequency lattice
/// {k pi / L : k = -N/2 .. N/2-1} per axis.
class Grid {
 public:
  /// Throws SizingError unless dim is 1 or 2, points is a power of two >= 8
  /// and half_width > 0.
  static Grid make(int dim, std::size_t points_per_axis, double half_width);

  int dim() const noexcept { return dim_; }
  std::size_t points_per_axis() const noexcept { return points_; }
  double half_width() const noexcept { return half_width_; }
  double spacing() const noexcept { return 2.0 * half_width_ / static_cast<double>(points_); }
  double nyquist() const noexcept;
  double freq_spacing() const noexcept;
  std::size_t total_points() const noexcept;

  /// Position of lattice index i along one axis.
  double coord(std::size_t i) const noexcept {
    return -half_width_ + spacing() * static_cast<double>(i);
  }
  /// Frequency of centred index k along one axis (k = 0 is -N/2).
  double freq(std::size_t k) const noexcept;

  /// Volume element dx^dim and dxi^dim.
  double cell_volume() const noexcept;
  double freq_cell_volume() const noexcept;

  std::vector<double> coords() const;
  std::vector<double> freqs() const;

  bool operator==(const Grid& other) const noexcept = default;

 private:
  Grid(int dim, std::size_t points, double half_width)
      : dim_(dim), points_(points), half_width_(half_width) {}

  int dim_ = 1;
  std::size_t points_ = 8;
  double half_width_ = 1.0;
};

enum class Domain { Position, Frequency };

/// Complex samples on a Grid, or a symbolic Dirac delta. Samples of 2-D
/// fields are row-major with the first axis slowest. Frequency-domain fields
/// use centred ordering.
class Field {
 public:
  static Field sampled(const Grid& grid, std::vector<cplx> samples,
                       Domain domain = Domain::Position);
  static Field zeros(const Grid& grid, Domain domain = Domain::Position);
  static Field from_function(const Grid& grid, const std::function<cplx(double)>& fn);
  static Field from_function(const Grid& grid,
                             const std::function<cplx(double, double)>& fn);
  static Field dirac(const Grid& grid, std::vector<double> center);

  const Grid& grid() const noexcept { return grid_; }
  Domain domain() const noexcept { return domain_; }
  bool is_delta() const noexcept { return delta_center_.has_value(); }
  const std::vector<double>& delta_center() const;

  std::span<const cplx> samples() const;
  std::span<cplx> samples_mut();
  const cplx& operator[](std::size_t i) const { return samples_[i]; }

  Field conj() const;
  Field operator+(const Field& other) const;
  Field operator-(const Field& other) const;
  Field operator*(cplx scale) const;

 private:
  Field(Grid grid, std::vector<cplx> samples, Domain domain,
        std::optional<std::vector<double>> delta)
      : grid_(grid), samples_(std::move(samples)), domain_(domain),
        delta_center_(std::move(delta)) {}

  Grid grid_;
  std::vector<cplx> samples_;
  Domain domain_ = Domain::Position;
  std::optional<std::vector<double>> delta_center_;
};

struct SobolevParams {
  double s = 0.0;  // smoothness exponent
  double m = 0.0;  // weight exponent
};

/// (1 + |v|^2)^{1/2}
inline double japanese_bracket(double v) { return std::sqrt(1.0 + v * v); }

Field fourier(const Field& f);
Field inverse_fourier(const Field& f);

/// Quadrature of \int f conj(g) dx.
cplx inner_product(const Field& f, const Field& g);
double l2_norm(const Field& f);
double max_abs(const Field& f);
double max_abs_diff(const Field& f, const Field& g);

/// || <xi>^s F[<x>^m f] ||_{L^2} via the spectral multiplier.
double weighted_sobolev_norm(const Field& f, const SobolevParams& params);

void require_same_grid(const Field& f, const Field& g, const char* op);
void require_sampled(const Field& f, const char* op);

}  // namespace wpk
