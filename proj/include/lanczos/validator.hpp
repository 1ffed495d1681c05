#pragma once

/**
 * @file validator.hpp
 * @brief Numerical validity checks for weights and kernels.
 *
 * A weight w is valid at order n when w^(j)(-1) = w^(j)(1) = 0 for
 * j = 0..n-1 and int w = 1. A kernel k of order n is valid when its
 * antiderivatives k0^(-m) (the ones vanishing at -1) satisfy
 * k0^(-m)(1) = 0 for m = 1..n and int k0^(-n) = 1. The antiderivatives are
 * built as nested GridFunctions.
 */

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lanczos/kernels.hpp"
#include "lanczos/quadrature.hpp"

namespace lanczos {

struct ConditionResidual {
  std::string name;
  double residual = 0.0;  // absolute, >= 0; +inf when the condition could not be evaluated
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

struct ValidationReport {
  std::string subject_id;
  int order = 0;
  std::vector<ConditionResidual> conditions;
  bool verdict = false;
  /// Weights: int w. Kernels: int k0^(-n).
  double area = 0.0;
  /// Largest change of any residual when the grid is refined (kernels only).
  std::optional<double> discretization_estimate;

  std::vector<std::string> failing() const;
  const ConditionResidual* find(const std::string& name) const;

  std::string to_text() const;
  /// Header `condition,residual,tolerance,pass`.
  void write_csv(std::ostream& out) const;
};

struct ValidationOptions {
  double tol = 1e-9;
  std::size_t grid_size = 4097;
  /// Degree of the interpolant carried between nested antiderivatives.
  int interpolation_degree = 5;
  double quad_tol = 1e-12;
  /// Flat-endpoint weights are also probed at +-(1 - endpoint_epsilon).
  double endpoint_epsilon = 1e-8;
  /// Recompute kernel residuals on a (2 * grid_size - 1) grid.
  bool refine_check = true;
};

ValidationReport validate_weight(const WeightSpec& weight, int n, const ValidationOptions& options = {});
ValidationReport validate_weight(const WeightSpec& weight, int n, double tol);

/// Error{NonConvergence} if a direct quadrature fails to converge.
ValidationReport validate_kernel(const KernelSpec& kernel, const ValidationOptions& options = {});
ValidationReport validate_kernel(const KernelSpec& kernel, double tol, std::size_t grid_size = 4097);

/// k0^(-1), ..., k0^(-n) on [-1, 1].
std::vector<GridFunction> repeated_antiderivatives(const RealFn& kernel, int n, std::size_t grid_size,
                                                   int interpolation_degree);

/// Rescales a kernel that fails only the area condition. Throws
/// Error{EndpointViolation} if any k0^(-m)(1) != 0 and Error{NotNormalizable}
/// if |int k0^(-n)| <= 1e-13.
KernelSpec normalize_kernel(const KernelSpec& kernel, const ValidationOptions& options = {});

}  // namespace lanczos
