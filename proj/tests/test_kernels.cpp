#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "lanczos/error.hpp"
#include "lanczos/fabius.hpp"
#include "lanczos/kernels.hpp"
#include "oracles.hpp"

using namespace lanczos;

namespace {

// Rodrigues: P_n = 1/(2^n n!) d^n/dx^n (x^2 - 1)^n, expanded with exact
// integer coefficients (ascending powers).
std::vector<double> rodrigues_coefficients(int n) {
  std::vector<std::int64_t> c(2 * n + 1, 0);
  // (x^2 - 1)^n = sum_k C(n,k) x^(2k) (-1)^(n-k)
  std::int64_t binom = 1;
  for (int k = 0; k <= n; ++k) {
    c[2 * k] = ((n - k) % 2 == 0 ? 1 : -1) * binom;
    binom = binom * (n - k) / (k + 1);
  }
  for (int d = 0; d < n; ++d) {
    for (std::size_t i = 1; i < c.size(); ++i) c[i - 1] = c[i] * static_cast<std::int64_t>(i);
    c.back() = 0;
  }
  double scale = 1.0;
  for (int i = 1; i <= n; ++i) scale *= 2.0 * i;
  std::vector<double> out(n + 1);
  for (int i = 0; i <= n; ++i) out[i] = static_cast<double>(c[i]) / scale;
  return out;
}

double horner(const std::vector<double>& c, double x) {
  double sum = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) sum = sum * x + *it;
  return sum;
}

}  // namespace

TEST_CASE("lanczos and constant weights") {
  const auto w = lanczos_weight();
  CHECK(w.eval(0.0) == 0.75);
  CHECK(w.eval(-1.0) == 0.0);
  CHECK(w.eval(1.0) == 0.0);
  REQUIRE(w.derivative(1));
  CHECK((*w.derivative(1))(1.0) == -1.5);
  CHECK((*w.derivative(2))(0.3) == -1.5);
  CHECK((*w.derivative(3))(0.3) == 0.0);

  const auto c = constant_weight();
  CHECK(c.eval(0.0) == 0.5);
  CHECK(c.eval(0.3) == 0.5);
  CHECK(integrate(c.eval, -1.0, 1.0, 1e-12).value == doctest::Approx(1.0).epsilon(1e-15));

  const auto k = lanczos_kernel();
  CHECK(k.order == 1);
  CHECK(k.provenance == KernelProvenance::DerivativeOfWeight);
  CHECK(k.eval(0.5) == -0.75);
}

TEST_CASE("legendre_polynomial") {
  CHECK(legendre_polynomial(0, 0.7) == 1.0);
  CHECK(legendre_polynomial(1, 0.7) == 0.7);
  CHECK(legendre_polynomial(2, 0.5) == doctest::Approx(-0.125).epsilon(1e-15));
  for (int n = 0; n <= 10; ++n) {
    CHECK(legendre_polynomial(n, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(legendre_polynomial(n, -1.0) == doctest::Approx(n % 2 ? -1.0 : 1.0).epsilon(1e-14));
  }
  SUBCASE("matches Rodrigues' formula") {
    for (int n = 0; n <= 8; ++n) {
      const auto c = rodrigues_coefficients(n);
      for (double x = -1.0; x <= 1.0; x += 0.0625) {
        CAPTURE(n);
        CAPTURE(x);
        CHECK(std::abs(legendre_polynomial(n, x) - horner(c, x)) < 1e-13);
      }
    }
  }
}

TEST_CASE("legendre_kernel") {
  CHECK(*odd_double_factorial(0) == 1);
  CHECK(*odd_double_factorial(1) == 3);
  CHECK(*odd_double_factorial(2) == 15);
  CHECK(*odd_double_factorial(6) == 135135);
  CHECK_FALSE(odd_double_factorial(40).has_value());

  const auto k1 = legendre_kernel(1);
  const auto lanczos_derivative = *lanczos_weight().derivative(1);
  for (double t = -1.0; t <= 1.0; t += 0.01) CHECK(std::abs(k1.eval(t) - lanczos_derivative(t)) <= 1e-14);

  const auto k2 = legendre_kernel(2);
  CHECK(k2.eval(0.0) == doctest::Approx(-3.75).epsilon(1e-15));
  // int k0^(-2) = k0^(-3)(1), by Cauchy's formula
  CHECK(std::abs(oracle::repeated_antiderivative_at_one(k2.eval, 3) - 1.0) <= 1e-10);
  CHECK(std::abs(oracle::repeated_antiderivative_at_one(k2.eval, 1)) <= 1e-12);
  CHECK(std::abs(oracle::repeated_antiderivative_at_one(k2.eval, 2)) <= 1e-12);

  CHECK_FALSE(legendre_kernel(16).approximate_constant);
  const auto big = legendre_kernel(20);
  CHECK(big.approximate_constant);
  CHECK(std::isfinite(big.eval(0.3)));
  CHECK_THROWS_AS(legendre_kernel(0), Error);
}

TEST_CASE("RationalPrefactor reproduces the known bump numerators") {
  // ascending powers of t
  CHECK(RationalPrefactor::of_order(0).coefficients() == std::vector<std::int64_t>{1});
  CHECK(RationalPrefactor::of_order(1).coefficients() == std::vector<std::int64_t>{0, -2});
  // 2 (3t^4 - 1)
  CHECK(RationalPrefactor::of_order(2).coefficients() == std::vector<std::int64_t>{-2, 0, 0, 0, 6});
  // -4t (6t^6 + 3t^4 - 10t^2 + 3)
  CHECK(RationalPrefactor::of_order(3).coefficients() ==
        std::vector<std::int64_t>{0, -12, 0, 40, 0, -12, 0, -24});
  for (int n = 1; n <= 10; ++n) CHECK(RationalPrefactor::of_order(n).degree() == 3 * n - 2);
  CHECK(RationalPrefactor::of_order(3).next().coefficients() == RationalPrefactor::of_order(4).coefficients());

  try {
    RationalPrefactor::of_order(60);
    FAIL("expected Overflow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Overflow);
  }
}

TEST_CASE("bump weight") {
  const auto w = bump_weight();
  CHECK(w.eval(0.0) == doctest::Approx(std::exp(-1.0) / 0.4439938161680786).epsilon(1e-15));
  CHECK(w.eval(0.0) == doctest::Approx(0.82856884).epsilon(1e-7));
  CHECK(w.eval(1.0) == 0.0);
  CHECK(w.eval(-1.0) == 0.0);
  CHECK(w.eval(1.5) == 0.0);
  CHECK(std::abs(integrate(w.eval, -1.0, 1.0, 1e-13).value - 1.0) <= 1e-11);
  CHECK(w.flat_endpoints);
  CHECK_FALSE(w.max_deriv_order.has_value());
}

TEST_CASE("bump kernel") {
  const auto k1 = bump_kernel(1);
  for (double t : {-0.8, -0.2, 0.3, 0.7}) {
    const double s = t * t - 1.0;
    CHECK(k1.eval(t) * kBumpNormalization * s * s / std::exp(1.0 / s) == doctest::Approx(-2.0 * t).epsilon(1e-13));
  }
  for (int n = 1; n <= 6; ++n) {
    const auto k = bump_kernel(n);
    CHECK(k.eval(1.0) == 0.0);
    CHECK(k.eval(-1.0) == 0.0);
    CHECK(k.eval(2.0) == 0.0);
    for (double t : {1.0 - 1e-3, 1.0 - 1e-8, 1.0 - 1e-15, -1.0 + 1e-12}) CHECK(std::isfinite(k.eval(t)));
  }
}

TEST_CASE("bump kernel agrees with finite differences of the weight") {
  const auto w = bump_weight();
  for (int n = 1; n <= 3; ++n) {
    const auto k = bump_kernel(n);
    double scale = 0.0;
    for (double t = -0.9; t <= 0.9; t += 0.01) scale = std::max(scale, std::abs(k.eval(t)));
    for (double t = -0.9; t <= 0.9001; t += 0.05) {
      CAPTURE(n);
      CAPTURE(t);
      const double fd = oracle::finite_difference_derivative(w.eval, t, n, 2e-3);
      CHECK(std::abs(fd - k.eval(t)) <= 1e-5 * std::max(std::abs(k.eval(t)), 1e-3 * scale));
    }
  }
}

TEST_CASE("Fabius weight and kernels") {
  const auto w = fabius_weight();
  CHECK(w.eval(-1.0) == 0.0);
  CHECK(std::abs(w.eval(1.0)) <= 1e-15);
  CHECK(std::abs(integrate(w.eval, -1.0, 1.0, 1e-12).value - 1.0) <= 1e-9);
  CHECK(w.max_deriv_order == 8);

  const auto k1 = fabius_kernel(1);
  CHECK(k1.eval(-1.0) == 0.0);
  CHECK(k1.eval(-0.75) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(integrate(k1.eval, -1.0, 1.0, 1e-12).value) <= 1e-9);

  // k_n is the derivative of k_(n-1)
  const auto k2 = fabius_kernel(2);
  for (double t : {-0.6, -0.1, 0.35}) {
    CHECK(oracle::finite_difference_derivative(k1.eval, t, 1, 1e-4) == doctest::Approx(k2.eval(t)).epsilon(1e-6));
  }
  for (int n = 1; n <= 8; ++n) {
    const auto k = fabius_kernel(n);
    CHECK(k.eval(-1.0) == 0.0);
    CHECK(std::abs(k.eval(1.0)) <= 1e-15);
  }
  try {
    fabius_kernel(9);
    FAIL("expected UnsupportedOrder");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedOrder);
  }
  // a larger table admits higher orders
  FabiusOptions options;
  options.grid_size = 257;
  options.max_order = 10;
  const auto wide = std::make_shared<const FabiusTable>(FabiusTable::build(options));
  CHECK_NOTHROW(fabius_kernel(10, wide));
}

TEST_CASE("registry") {
  CHECK(lookup_kernel("lanczos").kernel->order == 1);
  CHECK(lookup_kernel("constant").weight.has_value());
  CHECK_FALSE(lookup_kernel("constant").kernel.has_value());
  CHECK(lookup_kernel("legendre:4").kernel->order == 4);
  CHECK(lookup_kernel("bump:3").kernel->id == "bump:3");
  CHECK(lookup_kernel("bump").weight->id == "bump");
  CHECK(lookup_kernel("fabius:2").kernel->order == 2);
  for (const char* bad : {"legendre", "legendre:0", "legendre:x", "bump:-1", "gauss:2", "", "lanczos:2"}) {
    CAPTURE(bad);
    try {
      lookup_kernel(bad);
      FAIL("expected UnknownKernel");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::UnknownKernel);
    }
  }
  CHECK(registry_listing().size() == 5);
}

TEST_CASE("kernel helpers") {
  const auto scaled = scale_kernel(lanczos_kernel(), 2.0);
  CHECK(scaled.eval(0.5) == -1.5);
  CHECK(scaled.order == 1);
  const auto user = make_kernel("mine", 2, [](double t) { return t * t; });
  CHECK(user.provenance == KernelProvenance::Direct);
  CHECK_THROWS_AS(make_kernel("bad", 0, [](double) { return 0.0; }), Error);
  CHECK_THROWS_AS(kernel_from_weight(fabius_weight(), 9), Error);
  CHECK(kernel_from_weight(bump_weight(), 2).eval(0.4) == bump_kernel(2).eval(0.4));
}
