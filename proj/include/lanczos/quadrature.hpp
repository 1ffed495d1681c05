#pragma once

/**
 * @file quadrature.hpp
 * @brief Adaptive quadrature on finite intervals and grid antiderivatives.
 *
 * integrate() is a globally adaptive Gauss-Kronrod (7/15) scheme: the panel
 * with the largest |K15 - G7| is bisected until the summed estimate drops
 * below the absolute tolerance. Kronrod nodes are interior to every panel,
 * so integrands are never sampled at the interval ends. This matters for
 * exp(1/(t^2-1)) and friends, which are only defined at +-1 by continuous
 * extension.
 *
 * antiderivative() tabulates G(t) = int_a^t k on a uniform grid. The result
 * is a GridFunction, which is itself callable and can be antidifferentiated
 * again.
 */

#include <cstddef>
#include <functional>
#include <vector>

namespace lanczos {

using RealFn = std::function<double(double)>;

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;  // absolute, >= 0
  std::size_t evaluations = 0;
  std::size_t panels = 0;
  bool converged = true;  // false: NonConvergence, estimate above abs_tol
};

struct QuadratureOptions {
  double abs_tol = 1e-12;
  /// Maximum bisection depth of any panel (2^max_depth finest panels).
  int max_depth = 40;
  /// Hard cap on integrand evaluations.
  std::size_t max_evaluations = 4'000'000;
};

/// Throws Error{InvalidArgument} for a >= b or abs_tol <= 0 and
/// Error{NonFiniteSample} when f returns inf/nan. Non-convergence is not an
/// exception: the best estimate is returned with converged == false.
QuadratureResult integrate(const RealFn& f, double a, double b, const QuadratureOptions& options = {});

QuadratureResult integrate(const RealFn& f, double a, double b, double abs_tol, int max_depth = 40);

/// Fixed n-point Gauss-Legendre rule on [a,b], n in [1, 16].
double gauss_legendre(const RealFn& f, double a, double b, int points);

/// Samples of a function on a uniform grid, interpolated by local Lagrange
/// polynomials of fixed degree. Windows are mirror-symmetric about the grid
/// centre, so an odd/even symmetric sample set interpolates symmetrically.
class GridFunction {
 public:
  GridFunction(double a, double b, std::vector<double> values, int interpolation_degree = 3);

  double operator()(double t) const;

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  std::size_t size() const noexcept { return values_.size(); }
  double spacing() const noexcept { return step_; }
  int interpolation_degree() const noexcept { return degree_; }
  const std::vector<double>& nodes() const noexcept { return nodes_; }
  const std::vector<double>& values() const noexcept { return values_; }
  double front() const { return values_.front(); }
  double back() const { return values_.back(); }

  /// Exact integral of the interpolant over cell [x_i, x_{i+1}].
  double cell_integral(std::size_t cell) const;
  /// Integral of the interpolant from a to every node; result[0] == 0.
  std::vector<double> cumulative_integral() const;
  /// Integral of the interpolant over [a, b].
  double integral() const;

  /// Convenience wrapper that captures a shared copy.
  RealFn as_function() const;

 private:
  std::size_t window_start(std::size_t cell) const;
  double interpolate_in_window(std::size_t start, double u) const;

  double a_;
  double b_;
  double step_;
  int degree_;
  std::vector<double> nodes_;
  std::vector<double> values_;
};

/// G(t) = int_a^t k(s) ds on a uniform grid of grid_size nodes, G(a) == 0
/// exactly. Cell integrals use 8-point Gauss-Legendre, which is exact when k
/// is a GridFunction on the same grid with degree <= 15.
GridFunction antiderivative(const RealFn& k, std::size_t grid_size = 4097, int interpolation_degree = 3,
                            double a = -1.0, double b = 1.0);

/// Compensated (Neumaier) running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace lanczos
