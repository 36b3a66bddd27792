#include <algorithm>
#include <cmath>
#include <vector>

#include "wpk/fft.hpp"
#include "wpk/kernels.hpp"

namespace wpk::kernels {
namespace {

inline double lattice_sign(std::size_t c) { return (c & 1U) ? -1.0 : 1.0; }

// Phase-table entries held at once; larger xi sets are processed in blocks.
constexpr std::size_t kTableBudget = std::size_t{1} << 22;

}  // namespace

void windowed_sums_parallel(const Grid& grid, std::span<const cplx> f, const Window& w,
                            std::span<const double> xs, std::span<const double> xis,
                            std::span<cplx> out) {
  if (xs.empty() || xis.empty()) return;
  const auto n = static_cast<std::ptrdiff_t>(grid.points_per_axis());
  const double dx = grid.spacing();
  const double L = grid.half_width();
  const double radius = w.support_radius();

  auto lo_of = [&](double x) {
    return std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(std::ceil((x - radius + L) / dx)));
  };
  auto hi_of = [&](double x) {
    return std::min<std::ptrdiff_t>(n - 1, static_cast<std::ptrdiff_t>(std::floor((x + radius + L) / dx)));
  };
  std::ptrdiff_t jmin = n;
  std::ptrdiff_t jmax = -1;
  for (double x : xs) {
    jmin = std::min(jmin, lo_of(x));
    jmax = std::max(jmax, hi_of(x));
  }
  if (jmax < jmin) {
    std::fill(out.begin(), out.end(), cplx(0.0));
    return;
  }
  const auto span_len = static_cast<std::size_t>(jmax - jmin + 1);
  const std::size_t block = std::max<std::size_t>(1, kTableBudget / span_len);
  const std::size_t nxi = xis.size();

  std::vector<cplx> table;
  for (std::size_t k0 = 0; k0 < nxi; k0 += block) {
    const std::size_t k1 = std::min(nxi, k0 + block);
    table.assign((k1 - k0) * span_len, cplx(0.0));
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = static_cast<std::ptrdiff_t>(k0); k < static_cast<std::ptrdiff_t>(k1); ++k) {
      cplx* row = table.data() + (static_cast<std::size_t>(k) - k0) * span_len;
      for (std::size_t j = 0; j < span_len; ++j) {
        const double y = grid.coord(static_cast<std::size_t>(jmin) + j);
        row[j] = std::polar(1.0, -y * xis[static_cast<std::size_t>(k)]);
      }
    }

#pragma omp parallel
    {
      std::vector<cplx> fw;
#pragma omp for schedule(dynamic, 4)
      for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(xs.size()); ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        const double x = xs[i];
        const std::ptrdiff_t lo = lo_of(x);
        const std::ptrdiff_t hi = hi_of(x);
        if (hi < lo) {
          for (std::size_t k = k0; k < k1; ++k) out[i * nxi + k] = 0.0;
          continue;
        }
        fw.resize(static_cast<std::size_t>(hi - lo + 1));
        for (std::ptrdiff_t j = lo; j <= hi; ++j) {
          const double y = grid.coord(static_cast<std::size_t>(j));
          fw[static_cast<std::size_t>(j - lo)] = std::conj(w(y - x)) * f[static_cast<std::size_t>(j)];
        }
        for (std::size_t k = k0; k < k1; ++k) {
          const cplx* row = table.data() + (k - k0) * span_len + (lo - jmin);
          cplx acc = 0.0;
          for (std::size_t j = 0; j < fw.size(); ++j) acc += fw[j] * row[j];
          out[i * nxi + k] = acc * dx;
        }
      }
    }
  }
}

void lattice_wpt_parallel(const Grid& grid, std::span<const cplx> f, const Window& w,
                          std::span<cplx> out) {
  const std::size_t n = grid.points_per_axis();
  const double dx = grid.spacing();
  // the window is evaluated once per lattice displacement
  std::vector<cplx> wconj(n);
  for (std::size_t k = 0; k < n; ++k)
    wconj[k] = std::conj(w.periodic(grid, static_cast<std::ptrdiff_t>(k) - static_cast<std::ptrdiff_t>(n / 2)));

#pragma omp parallel
  {
    std::vector<cplx> buf(n);
#pragma omp for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
      const auto i = static_cast<std::size_t>(ii);
      for (std::size_t j = 0; j < n; ++j) {
        // displacement j - i, wrapped, stored at index (j - i + N/2) mod N
        buf[j] = wconj[(j + n + n / 2 - i) % n] * f[j];
      }
      fft::transform_1d(buf, fft::Direction::Forward);
      for (std::size_t c = 0; c < n; ++c) out[i * n + c] = dx * lattice_sign(c) * buf[(c + n / 2) % n];
    }
  }
}

}  // namespace wpk::kernels
