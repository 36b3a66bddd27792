#pragma once

// Thin, thread-safe wrapper over FFTW for the unnormalized DFT
//   X_k = sum_j x_j exp(sign * 2 pi i j k / N).
// Plans are cached per (shape, sign); execution is reentrant.

#include <complex>
#include <cstddef>
#include <span>

namespace wpk::fft {

enum class Direction { Forward = -1, Backward = +1 };

void transform_1d(std::span<std::complex<double>> data, Direction dir);

/// Row-major rows x cols array.
void transform_2d(std::span<std::complex<double>> data, std::size_t rows,
                  std::size_t cols, Direction dir);

}  // namespace wpk::fft
