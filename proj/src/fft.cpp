#include "wpk/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "wpk/error.hpp"

namespace wpk::fft {
namespace {

using Key = std::tuple<std::size_t, std::size_t, int>;

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t rows, std::size_t cols, int sign) {
    std::lock_guard lock(mutex_);
    const Key key{rows, cols, sign};
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<std::complex<double>> scratch(rows * cols);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan = rows == 1
        ? fftw_plan_dft_1d(static_cast<int>(cols), buf, buf, sign, flags)
        : fftw_plan_dft_2d(static_cast<int>(rows), static_cast<int>(cols), buf, buf,
                           sign, flags);
    if (plan == nullptr) throw NumericalError("fftw failed to create a plan");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<Key, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

void run(std::span<std::complex<double>> data, std::size_t rows, std::size_t cols,
         Direction dir) {
  if (data.size() != rows * cols) throw SizingError("fft buffer size mismatch");
  if (data.empty()) return;
  fftw_plan plan = cache().get(rows, cols, static_cast<int>(dir));
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace

void transform_1d(std::span<std::complex<double>> data, Direction dir) {
  run(data, 1, data.size(), dir);
}

void transform_2d(std::span<std::complex<double>> data, std::size_t rows,
                  std::size_t cols, Direction dir) {
  run(data, rows, cols, dir);
}

}  // namespace wpk::fft
