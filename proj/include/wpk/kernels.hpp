#pragma once

// Inner loops of the wave packet transform. Each kernel has a serial
// reference implementation and an OpenMP one; tests hold them to agreement
// and bench/ compares their throughput.

#include <span>

#include "wpk/grid_field.hpp"
#include "wpk/window.hpp"

namespace wpk {

enum class Exec { Serial, Parallel };

namespace kernels {

/// out[i * xis.size() + k] = dx * sum_j conj(w(y_j - x_i)) f_j exp(-i y_j xi_k),
/// the sum restricted to |y_j - x_i| <= w.support_radius().
void windowed_sums_serial(const Grid& grid, std::span<const cplx> f, const Window& w,
                          std::span<const double> xs, std::span<const double> xis,
                          std::span<cplx> out);
void windowed_sums_parallel(const Grid& grid, std::span<const cplx> f, const Window& w,
                            std::span<const double> xs, std::span<const double> xis,
                            std::span<cplx> out);

/// Full phase-space lattice: out[i * N + c] = W(x_i, xi_c) with the window
/// wrapped periodically (one FFT per x_i).
void lattice_wpt_serial(const Grid& grid, std::span<const cplx> f, const Window& w,
                        std::span<cplx> out);
void lattice_wpt_parallel(const Grid& grid, std::span<const cplx> f, const Window& w,
                          std::span<cplx> out);

/// One off-lattice frequency xi, every x_m = coord(m) + offset:
///   out[m] = dx * sum_j conj(w(y_j - x_m)) f_j exp(-i y_j xi),
/// evaluated as a zero-padded FFT cross-correlation of length 2N.
void correlation_wpt(const Grid& grid, std::span<const cplx> f, const Window& w, double xi,
                     double offset, std::span<cplx> out);

/// Cyclic 2-D convolution of two N x N arrays:
///   out[i][c] = sum_{j,e} a[(i-j) mod N][(c-e) mod N] * b[j][e]
void cyclic_convolve_serial(std::size_t n, std::span<const double> a,
                            std::span<const double> b, std::span<double> out);
void cyclic_convolve_fft(std::size_t n, std::span<const double> a, std::span<const double> b,
                         std::span<double> out);

}  // namespace kernels
}  // namespace wpk
