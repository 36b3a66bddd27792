#pragma once

// Analyzing windows for the wave packet transform: closed-form functions of
// the displacement y - x, or sampled Fields restricted to lattice displacements.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "wpk/grid_field.hpp"
#include "wpk/windows.hpp"

namespace wpk {

/// Undilated base window phi with the radius where |phi| < 1e-17 max|phi|.
struct WindowShape {
  std::string name;
  std::function<cplx(double)> base;
  double support_radius = 10.0;
};

WindowShape gaussian_shape();

/// Gaussian, x * Gaussian, Hermite-2, compact bump, chirped Gaussian.
const std::vector<WindowShape>& window_corpus();
const WindowShape& window_shape(const std::string& name);

class Window {
 public:
  using Fn = std::function<cplx(double)>;

  /// inverse_scale is the window's frequency scale (lambda^b for dilates);
  /// it drives the resolution check.
  static Window analytic(std::string label, Fn fn, double support_radius,
                         double inverse_scale);
  /// phi_lambda^{(t)} in closed form.
  static Window gaussian(const WindowSpec& spec);
  /// lambda^{b/2} phi(lambda^b x) for an arbitrary base shape.
  static Window dilated(const WindowShape& shape, double b, double lambda);
  /// A sampled window centred at x = 0; evaluable only at lattice displacements.
  static Window sampled(const Field& window);

  /// Value at displacement d = y - x.
  cplx operator()(double d) const;

  /// Value at the lattice displacement m * dx, wrapped periodically onto
  /// [-L, L). Used by full-lattice transforms so that discrete identities are
  /// exact.
  cplx periodic(const Grid& grid, std::ptrdiff_t m) const;

  /// Window samples centred at 0 on the grid (periodic wrap).
  Field on_grid(const Grid& grid) const;

  bool is_sampled() const noexcept { return sampled_ != nullptr; }
  double support_radius() const noexcept { return support_radius_; }
  double inverse_scale() const noexcept { return inverse_scale_; }
  const std::string& label() const noexcept { return label_; }

  /// Throws ResolutionError if inverse_scale * dx > 0.5, GridMismatchError if
  /// a sampled window lives on a different grid.
  void check_resolution(const Grid& grid) const;

 private:
  std::string label_;
  Fn fn_;
  std::shared_ptr<const Field> sampled_;
  double support_radius_ = 0.0;
  double inverse_scale_ = 1.0;
};

}  // namespace wpk
