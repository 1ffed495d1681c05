#pragma once

/**
 * @file kernels.hpp
 * @brief Weight functions and differentiation kernels on [-1, 1].
 *
 * A weight w estimates f^(n)(x0) as the average int w(t) f^(n)(x0 + h t) dt.
 * After n integrations by parts the same quantity is
 *
 *   (-1/h)^n int_{-1}^{1} k(t) f(x0 + h t) dt,   k = w^(n),
 *
 * provided w^(j)(+-1) = 0 for j < n and int w = 1. KernelSpec::eval stores
 * w^(n) itself; the (-1/h)^n factor is applied by the differentiator.
 */

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lanczos/quadrature.hpp"

namespace lanczos {

class FabiusTable;

enum class KernelProvenance { DerivativeOfWeight, Direct };

struct WeightSpec {
  std::string id;
  RealFn eval;
  /// Returns w^(k) for 1 <= k <= max_deriv_order; empty when no derivatives are known.
  std::function<RealFn(int)> derivative_fn;
  std::optional<int> max_deriv_order;  // nullopt: unbounded
  /// Derivatives vanish at +-1 only as one-sided limits (bump, Fabius).
  bool flat_endpoints = false;

  bool has_derivative(int k) const;
  /// w^(k); k == 0 is eval. nullopt when unavailable.
  std::optional<RealFn> derivative(int k) const;
};

struct KernelSpec {
  std::string id;
  int order = 1;
  RealFn eval;
  KernelProvenance provenance = KernelProvenance::Direct;
  /// Set when a normalising constant could not be formed exactly
  /// (e.g. (2n+1)!! beyond 64-bit range).
  bool approximate_constant = false;
};

/// Wrap a user callable as a kernel claimed valid for `order`.
KernelSpec make_kernel(std::string id, int order, RealFn eval);

/// k(t) * factor, same order.
KernelSpec scale_kernel(const KernelSpec& kernel, double factor);

/// The kernel w^(n) of a weight; Error{UnsupportedOrder} if unavailable.
KernelSpec kernel_from_weight(const WeightSpec& weight, int n);

// --- Polynomial weights ---------------------------------------------------

/// w(t) = 3/4 (1 - t^2); w' = -3/2 t.
WeightSpec lanczos_weight();
/// -3/2 t, order 1.
KernelSpec lanczos_kernel();

/// w(t) = 1/2. Not a kernel source: w(+-1) != 0, so only the boundary-term
/// form of the first derivative applies (central difference).
WeightSpec constant_weight();

/// P_n(x) by the three-term recurrence.
double legendre_polynomial(int n, double x);

/// (2n+1)!! = 1*3*5*...*(2n+1) exactly, nullopt on 64-bit overflow.
std::optional<std::uint64_t> odd_double_factorial(int n);

/// k_n(x) = ((-1)^n / 2) (2n+1)!! P_n(x).
KernelSpec legendre_kernel(int n);

// --- Exponential bump -----------------------------------------------------

/// K = int_{-1}^{1} exp(1/(t^2-1)) dt.
inline constexpr double kBumpNormalization = 0.4439938161680786;

/// Numerator Q_n of w_e^(n)(t) = Q_n(t) / (t^2-1)^(2n) * exp(1/(t^2-1)) / K.
///
/// Q_0 = 1 and
///   Q_{n+1} = (t^2-1)^2 Q_n' - (4 n t (t^2-1) + 2t) Q_n.
/// Coefficients are integers; they are kept exactly and overflow is an error.
class RationalPrefactor {
 public:
  /// Error{Overflow} if a coefficient leaves int64 range.
  static RationalPrefactor of_order(int n);

  int order() const noexcept { return order_; }
  /// Ascending powers of t.
  const std::vector<std::int64_t>& coefficients() const noexcept { return coefficients_; }
  int degree() const noexcept { return static_cast<int>(coefficients_.size()) - 1; }
  double operator()(double t) const;
  RationalPrefactor next() const;

 private:
  RationalPrefactor(int order, std::vector<std::int64_t> coefficients);

  int order_;
  std::vector<std::int64_t> coefficients_;
};

/// w_e(t) = exp(1/(t^2-1)) / K on (-1,1), exactly 0 for |t| >= 1.
WeightSpec bump_weight();
/// w_e^(n), exactly 0 for |t| >= 1.
KernelSpec bump_kernel(int n);

// --- Fabius ---------------------------------------------------------------

/// w(t) = Fb(t + 1).
WeightSpec fabius_weight(std::shared_ptr<const FabiusTable> table = nullptr);
/// k(t) = 2^(n(n+1)/2) Fb(2^n (t + 1)); Error{UnsupportedOrder} when
/// 2^(n+1) exceeds the table's max_argument.
KernelSpec fabius_kernel(int n, std::shared_ptr<const FabiusTable> table = nullptr);

// --- Registry ---------------------------------------------------------------

struct RegistryEntry {
  std::string id;
  std::optional<WeightSpec> weight;
  std::optional<KernelSpec> kernel;
};

/// Resolves `lanczos`, `constant`, `bump`, `fabius`, `legendre:<n>`,
/// `bump:<n>`, `fabius:<n>`. Error{UnknownKernel} otherwise.
RegistryEntry lookup_kernel(std::string_view id);

struct RegistryListing {
  std::string pattern;
  std::string orders;
  std::string description;
};

std::vector<RegistryListing> registry_listing();

}  // namespace lanczos
