#include "wpk/grid_field.hpp"

#include <algorithm>
#include <numbers>
#include <sstream>

#include "wpk/error.hpp"
#include "wpk/fft.hpp"

namespace wpk {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Sizing: return "sizing";
    case ErrorKind::GridMismatch: return "grid-mismatch";
    case ErrorKind::FrequencyRange: return "frequency-range";
    case ErrorKind::Resolution: return "resolution";
    case ErrorKind::DegenerateInput: return "degenerate-input";
    case ErrorKind::Parameter: return "parameter";
    case ErrorKind::UnsupportedInput: return "unsupported-input";
    case ErrorKind::Io: return "io";
    case ErrorKind::Numerical: return "numerical";
  }
  return "unknown";
}

Grid Grid::make(int dim, std::size_t points_per_axis, double half_width) {
  if (dim != 1 && dim != 2) {
    throw SizingError("grid dimension must be 1 or 2, got " + std::to_string(dim));
  }
  const bool pow2 = points_per_axis != 0 && (points_per_axis & (points_per_axis - 1)) == 0;
  if (!pow2 || points_per_axis < 8) {
    throw SizingError("points per axis must be a power of two >= 8, got " +
                      std::to_string(points_per_axis));
  }
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw SizingError("half width must be positive and finite");
  }
  return Grid(dim, points_per_axis, half_width);
}

double Grid::nyquist() const noexcept { return std::numbers::pi / spacing(); }

double Grid::freq_spacing() const noexcept { return std::numbers::pi / half_width_; }

std::size_t Grid::total_points() const noexcept {
  return dim_ == 1 ? points_ : points_ * points_;
}

double Grid::freq(std::size_t k) const noexcept {
  return (static_cast<double>(k) - static_cast<double>(points_ / 2)) * freq_spacing();
}

double Grid::cell_volume() const noexcept {
  return dim_ == 1 ? spacing() : spacing() * spacing();
}

double Grid::freq_cell_volume() const noexcept {
  return dim_ == 1 ? freq_spacing() : freq_spacing() * freq_spacing();
}

std::vector<double> Grid::coords() const {
  std::vector<double> out(points_);
  for (std::size_t i = 0; i < points_; ++i) out[i] = coord(i);
  return out;
}

std::vector<double> Grid::freqs() const {
  std::vector<double> out(points_);
  for (std::size_t k = 0; k < points_; ++k) out[k] = freq(k);
  return out;
}

Field Field::sampled(const Grid& grid, std::vector<cplx> samples, Domain domain) {
  if (samples.size() != grid.total_points()) {
    throw SizingError("field has " + std::to_string(samples.size()) +
                      " samples, grid expects " + std::to_string(grid.total_points()));
  }
  return Field(grid, std::move(samples), domain, std::nullopt);
}

Field Field::zeros(const Grid& grid, Domain domain) {
  return Field(grid, std::vector<cplx>(grid.total_points()), domain, std::nullopt);
}

Field Field::from_function(const Grid& grid, const std::function<cplx(double)>& fn) {
  if (grid.dim() != 1) throw SizingError("1-D sampler used on a 2-D grid");
  std::vector<cplx> s(grid.total_points());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = fn(grid.coord(i));
  return Field(grid, std::move(s), Domain::Position, std::nullopt);
}

Field Field::from_function(const Grid& grid,
                           const std::function<cplx(double, double)>& fn) {
  if (grid.dim() != 2) throw SizingError("2-D sampler used on a 1-D grid");
  const std::size_t n = grid.points_per_axis();
  std::vector<cplx> s(grid.total_points());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s[i * n + j] = fn(grid.coord(i), grid.coord(j));
  return Field(grid, std::move(s), Domain::Position, std::nullopt);
}

Field Field::dirac(const Grid& grid, std::vector<double> center) {
  if (center.size() != static_cast<std::size_t>(grid.dim())) {
    throw SizingError("delta centre dimension does not match grid");
  }
  return Field(grid, {}, Domain::Position, std::move(center));
}

const std::vector<double>& Field::delta_center() const {
  if (!delta_center_) throw UnsupportedInputError("field is not a Dirac delta");
  return *delta_center_;
}

std::span<const cplx> Field::samples() const {
  if (delta_center_) throw UnsupportedInputError("a Dirac delta has no samples");
  return samples_;
}

std::span<cplx> Field::samples_mut() {
  if (delta_center_) throw UnsupportedInputError("a Dirac delta has no samples");
  return samples_;
}

Field Field::conj() const {
  require_sampled(*this, "conj");
  std::vector<cplx> out(samples_.size());
  std::transform(samples_.begin(), samples_.end(), out.begin(),
                 [](cplx v) { return std::conj(v); });
  return Field(grid_, std::move(out), domain_, std::nullopt);
}

Field Field::operator+(const Field& other) const {
  require_same_grid(*this, other, "add");
  std::vector<cplx> out(samples_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = samples_[i] + other.samples_[i];
  return Field(grid_, std::move(out), domain_, std::nullopt);
}

Field Field::operator-(const Field& other) const {
  require_same_grid(*this, other, "subtract");
  std::vector<cplx> out(samples_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = samples_[i] - other.samples_[i];
  return Field(grid_, std::move(out), domain_, std::nullopt);
}

Field Field::operator*(cplx scale) const {
  require_sampled(*this, "scale");
  std::vector<cplx> out(samples_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = samples_[i] * scale;
  return Field(grid_, std::move(out), domain_, std::nullopt);
}

void require_same_grid(const Field& f, const Field& g, const char* op) {
  require_sampled(f, op);
  require_sampled(g, op);
  if (!(f.grid() == g.grid())) {
    throw GridMismatchError(std::string(op) + ": fields live on different grids");
  }
}

void require_sampled(const Field& f, const char* op) {
  if (f.is_delta()) {
    throw UnsupportedInputError(std::string(op) +
                                ": Dirac delta input is only accepted by closed-form paths");
  }
}

namespace {

// (-1)^k for the centred index c, where k = c - N/2. N/2 is even for N >= 8.
inline double lattice_sign(std::size_t c) { return (c & 1U) ? -1.0 : 1.0; }

// Centred index c  <->  FFT index (c - N/2) mod N.
inline std::size_t fft_index(std::size_t c, std::size_t n) { return (c + n / 2) % n; }

std::vector<cplx> transform(const Field& f, fft::Direction dir, double step) {
  const Grid& g = f.grid();
  const std::size_t n = g.points_per_axis();
  const auto in = f.samples();
  const double scale1 = step / std::sqrt(2.0 * std::numbers::pi);
  std::vector<cplx> work(in.size());
  std::vector<cplx> out(in.size());

  if (g.dim() == 1) {
    if (dir == fft::Direction::Forward) {
      std::copy(in.begin(), in.end(), work.begin());
      fft::transform_1d(work, dir);
      for (std::size_t c = 0; c < n; ++c)
        out[c] = scale1 * lattice_sign(c) * work[fft_index(c, n)];
    } else {
      for (std::size_t c = 0; c < n; ++c) work[fft_index(c, n)] = lattice_sign(c) * in[c];
      fft::transform_1d(work, dir);
      for (std::size_t j = 0; j < n; ++j) out[j] = scale1 * work[j];
    }
    return out;
  }

  const double scale = scale1 * scale1;
  if (dir == fft::Direction::Forward) {
    std::copy(in.begin(), in.end(), work.begin());
    fft::transform_2d(work, n, n, dir);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        out[a * n + b] = scale * lattice_sign(a) * lattice_sign(b) *
                         work[fft_index(a, n) * n + fft_index(b, n)];
  } else {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        work[fft_index(a, n) * n + fft_index(b, n)] =
            lattice_sign(a) * lattice_sign(b) * in[a * n + b];
    fft::transform_2d(work, n, n, dir);
    for (std::size_t i = 0; i < work.size(); ++i) out[i] = scale * work[i];
  }
  return out;
}

}  // namespace

Field fourier(const Field& f) {
  require_sampled(f, "fourier");
  if (f.domain() != Domain::Position) {
    throw UnsupportedInputError("fourier expects a position-domain field");
  }
  return Field::sampled(f.grid(), transform(f, fft::Direction::Forward, f.grid().spacing()),
                        Domain::Frequency);
}

Field inverse_fourier(const Field& f) {
  require_sampled(f, "inverse_fourier");
  if (f.domain() != Domain::Frequency) {
    throw UnsupportedInputError("inverse_fourier expects a frequency-domain field");
  }
  return Field::sampled(f.grid(),
                        transform(f, fft::Direction::Backward, f.grid().freq_spacing()),
                        Domain::Position);
}

cplx inner_product(const Field& f, const Field& g) {
  require_same_grid(f, g, "inner_product");
  const auto a = f.samples();
  const auto b = g.samples();
  cplx acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * std::conj(b[i]);
  const double vol = f.domain() == Domain::Position ? f.grid().cell_volume()
                                                    : f.grid().freq_cell_volume();
  return acc * vol;
}

double l2_norm(const Field& f) {
  require_sampled(f, "l2_norm");
  double acc = 0.0;
  for (const cplx& v : f.samples()) acc += std::norm(v);
  const double vol = f.domain() == Domain::Position ? f.grid().cell_volume()
                                                    : f.grid().freq_cell_volume();
  return std::sqrt(acc * vol);
}

double max_abs(const Field& f) {
  double m = 0.0;
  for (const cplx& v : f.samples()) m = std::max(m, std::abs(v));
  return m;
}

double max_abs_diff(const Field& f, const Field& g) {
  require_same_grid(f, g, "max_abs_diff");
  const auto a = f.samples();
  const auto b = g.samples();
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double weighted_sobolev_norm(const Field& f, const SobolevParams& params) {
  require_sampled(f, "weighted_sobolev_norm");
  if (!std::isfinite(params.s) || !std::isfinite(params.m)) {
    throw ParameterError("Sobolev exponents must be finite");
  }
  const Grid& g = f.grid();
  const std::size_t n = g.points_per_axis();
  std::vector<cplx> weighted(f.samples().begin(), f.samples().end());
  if (params.m != 0.0) {
    for (std::size_t i = 0; i < weighted.size(); ++i) {
      double r2 = 0.0;
      if (g.dim() == 1) {
        r2 = g.coord(i) * g.coord(i);
      } else {
        const double x = g.coord(i / n);
        const double y = g.coord(i % n);
        r2 = x * x + y * y;
      }
      weighted[i] *= std::pow(1.0 + r2, params.m / 2.0);
    }
  }
  const Field spec = fourier(Field::sampled(g, std::move(weighted)));
  const auto s = spec.samples();
  double acc = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    double k2 = 0.0;
    if (g.dim() == 1) {
      k2 = g.freq(i) * g.freq(i);
    } else {
      const double kx = g.freq(i / n);
      const double ky = g.freq(i % n);
      k2 = kx * kx + ky * ky;
    }
    acc += std::pow(1.0 + k2, params.s) * std::norm(s[i]);
  }
  return std::sqrt(acc * g.freq_cell_volume());
}

}  // namespace wpk
