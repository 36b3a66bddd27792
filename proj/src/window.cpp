#include "wpk/window.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "wpk/error.hpp"

namespace wpk {
namespace {

cplx bump(double x, double half_width) {
  const double r = x / half_width;
  if (std::abs(r) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - r * r));
}

std::ptrdiff_t wrap_index(std::ptrdiff_t m, std::ptrdiff_t n) {
  std::ptrdiff_t k = (m + n / 2) % n;
  if (k < 0) k += n;
  return k - n / 2;
}

}  // namespace

WindowShape gaussian_shape() {
  return {"gaussian", [](double x) -> cplx { return std::exp(-x * x / 2.0); }, 8.9};
}

const std::vector<WindowShape>& window_corpus() {
  static const std::vector<WindowShape> corpus = {
      gaussian_shape(),
      {"x_gaussian", [](double x) -> cplx { return x * std::exp(-x * x / 2.0); }, 9.3},
      {"hermite2",
       [](double x) -> cplx { return (4.0 * x * x - 2.0) * std::exp(-x * x / 2.0); }, 9.7},
      {"bump", [](double x) { return bump(x, 2.0); }, 2.0},
      {"chirped_gaussian",
       [](double x) { return std::exp(cplx(-x * x / 2.0, x * x / 2.0)); }, 8.9},
  };
  return corpus;
}

const WindowShape& window_shape(const std::string& name) {
  for (const auto& s : window_corpus())
    if (s.name == name) return s;
  throw ParameterError("unknown window shape '" + name + "'");
}

Window Window::analytic(std::string label, Fn fn, double support_radius,
                        double inverse_scale) {
  Window w;
  w.label_ = std::move(label);
  w.fn_ = std::move(fn);
  w.support_radius_ = support_radius;
  w.inverse_scale_ = inverse_scale;
  return w;
}

Window Window::gaussian(const WindowSpec& spec) {
  spec.validate();
  if (spec.dim != 1) throw UnsupportedInputError("analyzing windows are 1-D");
  char label[128];
  std::snprintf(label, sizeof label, "gaussian(b=%g,lambda=%g,t=%g)", spec.b, spec.lambda,
                spec.t);
  return analytic(label, [spec](double d) { return window_value(spec, d); },
                  window_support_radius(spec), spec.scale());
}

Window Window::dilated(const WindowShape& shape, double b, double lambda) {
  WindowSpec{b, lambda, 0.0, 1}.validate();
  const double scale = std::pow(lambda, b);
  const double amp = std::sqrt(scale);
  char label[128];
  std::snprintf(label, sizeof label, "%s(b=%g,lambda=%g)", shape.name.c_str(), b, lambda);
  auto base = shape.base;
  return analytic(label, [base, scale, amp](double d) { return amp * base(scale * d); },
                  shape.support_radius / scale, scale);
}

Window Window::sampled(const Field& window) {
  require_sampled(window, "Window::sampled");
  if (window.grid().dim() != 1) throw UnsupportedInputError("analyzing windows are 1-D");
  Window w;
  w.label_ = "sampled";
  w.sampled_ = std::make_shared<const Field>(window);
  w.support_radius_ = window.grid().half_width();
  w.inverse_scale_ = 0.0;
  return w;
}

cplx Window::operator()(double d) const {
  if (!sampled_) return fn_(d);
  const Grid& g = sampled_->grid();
  const double m = d / g.spacing();
  const double mr = std::round(m);
  if (std::abs(m - mr) > 1e-9) {
    throw UnsupportedInputError("sampled window evaluated off the lattice");
  }
  return periodic(g, static_cast<std::ptrdiff_t>(mr));
}

cplx Window::periodic(const Grid& grid, std::ptrdiff_t m) const {
  const auto n = static_cast<std::ptrdiff_t>(grid.points_per_axis());
  const std::ptrdiff_t k = wrap_index(m, n);
  if (sampled_) {
    if (!(sampled_->grid() == grid)) throw GridMismatchError("sampled window grid differs");
    return (*sampled_)[static_cast<std::size_t>(k + n / 2)];
  }
  return fn_(static_cast<double>(k) * grid.spacing());
}

Field Window::on_grid(const Grid& grid) const {
  if (sampled_) {
    if (!(sampled_->grid() == grid)) throw GridMismatchError("sampled window grid differs");
    return *sampled_;
  }
  const auto n = static_cast<std::ptrdiff_t>(grid.points_per_axis());
  std::vector<cplx> s(grid.points_per_axis());
  for (std::ptrdiff_t i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = periodic(grid, i - n / 2);
  return Field::sampled(grid, std::move(s));
}

void Window::check_resolution(const Grid& grid) const {
  if (sampled_) {
    if (!(sampled_->grid() == grid)) throw GridMismatchError("sampled window grid differs");
    return;
  }
  if (inverse_scale_ * grid.spacing() > 0.5) {
    throw ResolutionError("window " + label_ + " under-resolved on grid (lambda^b * dx = " +
                          std::to_string(inverse_scale_ * grid.spacing()) + ")");
  }
}

}  // namespace wpk
