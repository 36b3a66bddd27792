#include <algorithm>
#include <cmath>

#include "wpk/error.hpp"
#include "wpk/fft.hpp"
#include "wpk/kernels.hpp"

namespace wpk::kernels {
namespace {

inline double lattice_sign(std::size_t c) { return (c & 1U) ? -1.0 : 1.0; }

}  // namespace

void windowed_sums_serial(const Grid& grid, std::span<const cplx> f, const Window& w,
                          std::span<const double> xs, std::span<const double> xis,
                          std::span<cplx> out) {
  const auto n = static_cast<std::ptrdiff_t>(grid.points_per_axis());
  const double dx = grid.spacing();
  const double L = grid.half_width();
  const double radius = w.support_radius();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    const auto lo = std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(std::ceil((x - radius + L) / dx)));
    const auto hi = std::min<std::ptrdiff_t>(n - 1, static_cast<std::ptrdiff_t>(std::floor((x + radius + L) / dx)));
    for (std::size_t k = 0; k < xis.size(); ++k) {
      cplx acc = 0.0;
      for (std::ptrdiff_t j = lo; j <= hi; ++j) {
        const double y = grid.coord(static_cast<std::size_t>(j));
        acc += std::conj(w(y - x)) * f[static_cast<std::size_t>(j)] * std::polar(1.0, -y * xis[k]);
      }
      out[i * xis.size() + k] = acc * dx;
    }
  }
}

void lattice_wpt_serial(const Grid& grid, std::span<const cplx> f, const Window& w,
                        std::span<cplx> out) {
  const std::size_t n = grid.points_per_axis();
  const double dx = grid.spacing();
  std::vector<cplx> buf(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto m = static_cast<std::ptrdiff_t>(j) - static_cast<std::ptrdiff_t>(i);
      buf[j] = std::conj(w.periodic(grid, m)) * f[j];
    }
    fft::transform_1d(buf, fft::Direction::Forward);
    for (std::size_t c = 0; c < n; ++c) out[i * n + c] = dx * lattice_sign(c) * buf[(c + n / 2) % n];
  }
}

void correlation_wpt(const Grid& grid, std::span<const cplx> f, const Window& w, double xi,
                     double offset, std::span<cplx> out) {
  const std::size_t n = grid.points_per_axis();
  const std::size_t m = 2 * n;
  const double dx = grid.spacing();
  const double radius = w.support_radius();
  if (out.size() != n) throw SizingError("correlation_wpt output must hold N values");

  std::vector<cplx> a(m, 0.0);
  for (std::size_t j = 0; j < n; ++j) a[j] = f[j] * std::polar(1.0, -grid.coord(j) * xi);

  // b[e mod M] = conj(w(-e dx - offset)) for e in (-N, N)
  std::vector<cplx> b(m, 0.0);
  bool any = false;
  const auto sn = static_cast<std::ptrdiff_t>(n);
  for (std::ptrdiff_t e = -(sn - 1); e < sn; ++e) {
    const double d = -static_cast<double>(e) * dx - offset;
    if (std::abs(d) > radius) continue;
    b[static_cast<std::size_t>((e + static_cast<std::ptrdiff_t>(m)) % static_cast<std::ptrdiff_t>(m))] = std::conj(w(d));
    any = true;
  }
  if (!any) {
    std::fill(out.begin(), out.end(), cplx(0.0));
    return;
  }
  fft::transform_1d(a, fft::Direction::Forward);
  fft::transform_1d(b, fft::Direction::Forward);
  for (std::size_t k = 0; k < m; ++k) a[k] *= b[k];
  fft::transform_1d(a, fft::Direction::Backward);
  const double scale = dx / static_cast<double>(m);
  for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * scale;
}

void cyclic_convolve_serial(std::size_t n, std::span<const double> a,
                            std::span<const double> b, std::span<double> out) {
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < n; ++c) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t e = 0; e < n; ++e)
          acc += a[((i + n - j) % n) * n + (c + n - e) % n] * b[j * n + e];
      out[i * n + c] = acc;
    }
}

void cyclic_convolve_fft(std::size_t n, std::span<const double> a, std::span<const double> b,
                         std::span<double> out) {
  std::vector<cplx> fa(a.begin(), a.end());
  std::vector<cplx> fb(b.begin(), b.end());
  fft::transform_2d(fa, n, n, fft::Direction::Forward);
  fft::transform_2d(fb, n, n, fft::Direction::Forward);
  for (std::size_t k = 0; k < fa.size(); ++k) fa[k] *= fb[k];
  fft::transform_2d(fa, n, n, fft::Direction::Backward);
  const double scale = 1.0 / static_cast<double>(n * n);
  for (std::size_t k = 0; k < fa.size(); ++k) out[k] = fa[k].real() * scale;
}

}  // namespace wpk::kernels
