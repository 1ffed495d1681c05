#pragma once

/**
 * @file fabius.hpp
 * @brief Tabulated Fabius function.
 *
 * Fb is the smooth function on [0, inf) with Fb'(x) = 2 Fb(2x), Fb(0) = 0,
 * Fb(1) = 1. On [0,1] it is the distribution function of sum_m 2^-m U_m
 * with U_m iid uniform(0,1), and it satisfies Fb(1-x) = 1 - Fb(x).
 *
 * The base table on [0,1] is the fixed point of
 *
 *   (T F)(x) = int_0^{2x} F(v) dv        for x in [0, 1/2]
 *   (T F)(x) = 1 - (T F)(1 - x)           for x in [1/2, 1]
 *
 * starting from F(x) = x, with F held on a uniform grid and integrated
 * through its degree-5 Lagrange interpolant. Beyond [0,1]:
 *
 *   Fb(x) = 1 - Fb(x - 1)      for x in (1, 2]
 *   Fb(x) = -Fb(x - 2^r)       for x in (2^r, 2^(r+1)], r >= 1
 */

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <vector>

#include "lanczos/quadrature.hpp"

namespace lanczos {

struct FabiusOptions {
  std::size_t grid_size = 4097;  // odd, >= 257
  int max_iterations = 200;
  double tol = 1e-12;
  /// Highest kernel order supported; max_argument = 2^(max_order + 1).
  int max_order = 8;
};

class FabiusTable {
 public:
  /// Throws Error{NonConvergence} when the fixed-point residual is still
  /// above tol after max_iterations.
  static FabiusTable build(const FabiusOptions& options = {});

  /// Reads the (node,value) CSV written by write_csv.
  static FabiusTable read_csv(std::istream& in, int max_order = 8);
  void write_csv(std::ostream& out) const;

  /// Fb(x) for 0 <= x <= max_argument(); Error{OutOfRange} otherwise.
  double eval(double x) const;

  /// Fb^(m)(x) = 2^(m(m+1)/2) Fb(2^m x).
  double eval_derivative(double x, int m) const;

  const GridFunction& base() const noexcept { return base_; }
  int iterations() const noexcept { return iterations_; }
  /// Sup-norm change in the last iteration (0 for imported tables).
  double residual() const noexcept { return residual_history_.empty() ? 0.0 : residual_history_.back(); }
  const std::vector<double>& residual_history() const noexcept { return residual_history_; }
  double max_argument() const noexcept { return max_argument_; }

 private:
  FabiusTable(GridFunction base, int iterations, std::vector<double> history, double max_argument);

  GridFunction base_;
  int iterations_;
  std::vector<double> residual_history_;
  double max_argument_;
};

FabiusTable build_table(std::size_t grid_size, int max_iterations, double tol);

/// Process-wide table with default options, built on first use.
std::shared_ptr<const FabiusTable> default_fabius_table();

}  // namespace lanczos
