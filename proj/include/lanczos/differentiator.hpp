#pragma once

/**
 * @file differentiator.hpp
 * @brief Derivative estimates f^(n)(x0) ~ (-1/h)^n int_{-1}^{1} k(t) f(x0 + h t) dt.
 */

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lanczos/kernels.hpp"
#include "lanczos/quadrature.hpp"

namespace lanczos {

struct DerivativeEstimate {
  double value = 0.0;
  int order = 1;
  double h = 0.0;
  double x0 = 0.0;
  std::string kernel_id;
  /// Quadrature error estimate scaled by h^-n.
  double quad_error = 0.0;
  bool converged = true;
};

/// Error{OrderMismatch} if kernel.order != n, Error{InvalidArgument} for
/// h <= 0; quadrature errors propagate.
DerivativeEstimate estimate(const RealFn& f, double x0, int n, double h, const KernelSpec& kernel,
                            double quad_tol = 1e-10);

/// (f(x0 + h) - f(x0 - h)) / (2h).
double central_difference(const RealFn& f, double x0, double h);

/// First derivative through one integration by parts, keeping the boundary
/// term:  (1/h) [w(t) f(x0 + h t)]_{-1}^{1} - (1/h) int w'(t) f(x0 + h t) dt.
/// Valid for any normalised weight, including ones with w(+-1) != 0.
double boundary_term_derivative(const RealFn& f, double x0, double h, const WeightSpec& weight,
                                double quad_tol = 1e-12);

struct SweepRow {
  double h = 0.0;
  double estimate = 0.0;
  std::optional<double> abs_error;
  double quad_error = 0.0;
  bool ok = true;
  std::string error;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::string kernel_id;
  int order = 1;
  double x0 = 0.0;
  std::optional<double> reference;
  /// Least-squares slope of log|error| against log h over the usable rows.
  std::optional<double> observed_order;

  /// Header `h,estimate,abs_error,quad_error`; abs_error is omitted when
  /// there is no reference. 17 significant digits, locale independent.
  void write_csv(std::ostream& out) const;
  std::string to_text() const;
};

/// Rows that fail are flagged and the sweep continues.
SweepResult sweep(const RealFn& f, double x0, int n, const KernelSpec& kernel, std::span<const double> h_values,
                  std::optional<double> reference = std::nullopt, double quad_tol = 1e-10);

/// Rows of a CSV written by SweepResult::write_csv.
std::vector<SweepRow> read_sweep_csv(std::istream& in);

/// Slope of log y against log x by least squares; nullopt for < 2 usable points.
std::optional<double> loglog_slope(std::span<const double> x, std::span<const double> y);

// --- test-function corpus ---------------------------------------------------

struct TestFunction {
  std::string id;
  RealFn f;
  /// Exact f^(n)(x) where it exists.
  std::function<std::optional<double>(int, double)> derivative;
};

/// Polynomial sum_i c_i x^i with exact derivatives.
TestFunction polynomial_function(std::vector<double> coefficients);

/// exp, sin, cos, abs, xabs (x|x|), smoothstep ((1 + tanh(10x)) / 2) and
/// the monomials x^0 .. x^6.
std::vector<TestFunction> test_corpus();

}  // namespace lanczos
