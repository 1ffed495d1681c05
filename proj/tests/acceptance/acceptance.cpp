// Acceptance gate. `acceptance` runs every criterion, `acceptance N` runs one.
// Each criterion prints exactly one line:  PASS|FAIL  <n>  <summary>.
// Exit status is 0 only if every selected criterion passed.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lanczos/differentiator.hpp"
#include "lanczos/error.hpp"
#include "lanczos/fabius.hpp"
#include "lanczos/kernels.hpp"
#include "lanczos/quadrature.hpp"
#include "lanczos/validator.hpp"
#include "oracles.hpp"

using namespace lanczos;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << (detail.tellp() > 0 ? "; " : "") << what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string sci(double x) {
  std::ostringstream out;
  out.precision(3);
  out << std::scientific << x;
  return out.str();
}

std::set<std::string> failing_set(const ValidationReport& r) {
  const auto names = r.failing();
  return {names.begin(), names.end()};
}

std::string join(const std::set<std::string>& names) {
  std::string out = "{";
  for (const auto& n : names) out += (out.size() > 1 ? "," : "") + n;
  return out + "}";
}

// 1. Normalization constant of the bump.
Outcome constant_k() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  const auto r = integrate(
      [](double t) {
        const double s = (t - 1.0) * (t + 1.0);
        return s < 0.0 ? std::exp(1.0 / s) : 0.0;
      },
      -1.0, 1.0, 1e-13);
  const double elapsed = seconds_since(start);
  const double gap = std::abs(r.value - 0.4439938161680786);
  o.require(r.converged, "quadrature did not converge");
  o.require(gap <= 1e-12, "|K - 0.4439938161680786| = " + sci(gap));
  o.require(elapsed < 1.0, "took " + sci(elapsed) + " s");
  o.detail << (o.pass ? "K error " + sci(gap) + ", " + sci(elapsed) + " s" : "");
  return o;
}

// 2. int (x^2 - 1)^n = sqrt(pi) (-1)^n n! / Gamma(n + 3/2).
Outcome legendre_identity() {
  Outcome o;
  double worst = 0.0;
  for (int n = 1; n <= 6; ++n) {
    const double numeric = integrate([n](double x) { return std::pow(x * x - 1.0, n); }, -1.0, 1.0, 1e-14).value;
    // Gamma(n + 3/2) = sqrt(pi) (2n+1)!! / 2^(n+1)
    const double double_factorial = static_cast<double>(*odd_double_factorial(n));
    const double gamma = std::sqrt(std::numbers::pi) * double_factorial / std::ldexp(1.0, n + 1);
    double n_factorial = 1.0;
    for (int i = 2; i <= n; ++i) n_factorial *= i;
    const double closed = std::sqrt(std::numbers::pi) * (n % 2 ? -1.0 : 1.0) * n_factorial / gamma;
    const double rel = std::abs(numeric - closed) / std::abs(closed);
    worst = std::max(worst, rel);
    o.require(rel <= 1e-11, "n=" + std::to_string(n) + " relative error " + sci(rel));
    const double gamma_std = std::tgamma(n + 1.5);
    o.require(std::abs(gamma - gamma_std) <= 1e-13 * gamma_std, "half-integer Gamma mismatch at n=" + std::to_string(n));
  }
  if (o.pass) o.detail << "n=1..6, worst relative error " << sci(worst);
  return o;
}

// 3. Kernel validity suite.
Outcome kernel_validity() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  int checked = 0;
  for (int n = 1; n <= 4; ++n) {
    const std::vector<std::pair<KernelSpec, double>> cases = {
        {legendre_kernel(n), 1e-8}, {bump_kernel(n), 1e-8}, {fabius_kernel(n), 1e-6}};
    for (const auto& [kernel, tol] : cases) {
      const auto r = validate_kernel(kernel, tol);
      o.require(r.verdict, kernel.id + " fails " + join(failing_set(r)));
      ++checked;
    }
  }
  struct Broken {
    KernelSpec kernel;
    std::string predicted;
  };
  const std::vector<Broken> broken = {
      {make_kernel("t", 1, [](double t) { return t; }), "area"},
      {make_kernel("t^2", 1, [](double t) { return t * t; }), "k0^(-1)(+1)"},
      {make_kernel("0.5", 1, [](double) { return 0.5; }), "k0^(-1)(+1)"},
  };
  for (const auto& b : broken) {
    const auto r = validate_kernel(b.kernel, 1e-9);
    const auto failing = failing_set(r);
    o.require(failing == std::set<std::string>{b.predicted},
              "k=" + b.kernel.id + " fails " + join(failing) + ", predicted {" + b.predicted + "}");
  }
  const double elapsed = seconds_since(start);
  o.require(elapsed < 30.0, "took " + sci(elapsed) + " s");
  if (o.pass) o.detail << checked << " kernels valid, 3 broken kernels fail as predicted, " << sci(elapsed) << " s";
  return o;
}

// 4. Bump prefactor numerators against the closed forms, integer for integer.
Outcome prefactor_regression() {
  Outcome o;
  using Coefficients = std::vector<std::int64_t>;
  // -2t;  2(3t^4 - 1);  -4t(6t^6 + 3t^4 - 10t^2 + 3)   (ascending powers)
  const std::vector<Coefficients> expected = {
      {0, -2},
      {-2, 0, 0, 0, 6},
      {0, -12, 0, 40, 0, -12, 0, -24},
  };
  for (int n = 1; n <= 3; ++n) {
    o.require(RationalPrefactor::of_order(n).coefficients() == expected[n - 1],
              "numerator of order " + std::to_string(n) + " differs");
  }
  if (o.pass) o.detail << "Q1..Q3 equal the closed-form numerators";
  return o;
}

// 5. Exactness on monomials.
Outcome exactness() {
  Outcome o;
  double worst = 0.0;
  int count = 0;
  for (int n = 1; n <= 3; ++n) {
    std::vector<KernelSpec> kernels = {legendre_kernel(n), bump_kernel(n), fabius_kernel(n)};
    if (n == 1) kernels.push_back(lanczos_kernel());
    double factorial = 1.0;
    for (int i = 2; i <= n; ++i) factorial *= i;
    for (const auto& k : kernels) {
      for (double x0 : {0.0, 0.7}) {
        for (double h : {1.0, 0.5, 0.1}) {
          const double value = estimate([n](double x) { return std::pow(x, n); }, x0, n, h, k, 1e-12).value;
          const double gap = std::abs(value - factorial);
          worst = std::max(worst, gap);
          ++count;
          o.require(gap <= 1e-8, k.id + " x0=" + std::to_string(x0) + " h=" + std::to_string(h) + " off by " + sci(gap));
        }
      }
    }
  }
  if (o.pass) o.detail << count << " estimates, worst error " << sci(worst);
  return o;
}

// 6. Convergence on exp and sin.
Outcome convergence() {
  Outcome o;
  const std::vector<double> hs = {0.5, 0.25, 0.125, 0.0625, 0.03125};
  auto f = [](double x) { return std::exp(x); };
  for (int n = 1; n <= 3; ++n) {
    std::vector<KernelSpec> kernels = {legendre_kernel(n), bump_kernel(n), fabius_kernel(n)};
    if (n == 1) kernels.push_back(lanczos_kernel());
    for (const auto& k : kernels) {
      const auto result = sweep(f, 0.0, n, k, hs, 1.0, 1e-12);
      for (std::size_t i = 0; i < result.rows.size(); ++i) {
        const auto& row = result.rows[i];
        o.require(row.ok, k.id + " row h=" + std::to_string(row.h) + " failed");
        if (i > 0) {
          o.require(*row.abs_error < *result.rows[i - 1].abs_error,
                    k.id + " error not decreasing at h=" + std::to_string(row.h));
        }
      }
    }
  }
  const double h = 1e-3;
  const auto sine = sweep([](double x) { return std::sin(x); }, 0.5, 1, lanczos_kernel(),
                          std::vector<double>{0.1, 0.01, h}, std::cos(0.5));
  const double error = *sine.rows.back().abs_error;
  o.require(error < 1e-6, "sin sweep error at h=1e-3 is " + sci(error));
  if (o.pass) {
    o.detail << "all families n=1..3 strictly decreasing; sin error at h=1e-3 " << sci(error);
    if (sine.observed_order) o.detail << ", observed order " << std::to_string(*sine.observed_order);
  }
  return o;
}

// 7. Fabius function.
Outcome fabius_suite() {
  Outcome o;
  const auto& fb = *default_fabius_table();
  const double half = std::abs(fb.eval(0.5) - 0.5);
  o.require(half <= 1e-12, "|Fb(1/2) - 1/2| = " + sci(half));

  double symmetry = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double x = (i + 0.5) / 1000.0;
    symmetry = std::max(symmetry, std::abs(fb.eval(x) + fb.eval(1.0 - x) - 1.0));
  }
  o.require(symmetry <= 1e-10, "symmetry residual " + sci(symmetry));

  const double area = integrate([&](double x) { return fb.eval(x); }, 0.0, 2.0, 1e-12).value;
  o.require(std::abs(area - 1.0) <= 1e-9, "int_0^2 Fb = " + std::to_string(area));

  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> dist(1e-3, fb.max_argument() / 2.0 - 1e-3);
  double equation = 0.0;
  const double step = 1e-5;
  for (int i = 0; i < 100; ++i) {
    const double x = dist(rng);
    const double derivative = (fb.eval(x + step) - fb.eval(x - step)) / (2.0 * step);
    equation = std::max(equation, std::abs(derivative - 2.0 * fb.eval(2.0 * x)));
  }
  o.require(equation <= 1e-4, "functional-equation residual " + sci(equation));

  const double quarter = std::abs(fb.eval(0.25) - oracle::fabius_cdf_fourier(0.25));
  o.require(quarter <= 1e-6, "Fb(1/4) differs from the oracle by " + sci(quarter));

  if (o.pass) {
    o.detail << "symmetry " << sci(symmetry) << ", area error " << sci(std::abs(area - 1.0)) << ", equation "
             << sci(equation) << ", Fb(1/4) vs oracle " << sci(quarter);
  }
  return o;
}

// 8. Wrong normalization gives a wrong derivative.
Outcome wrong_normalization() {
  Outcome o;
  const auto doubled = scale_kernel(lanczos_kernel(), 2.0);
  const double value = estimate([](double x) { return std::exp(x); }, 0.0, 1, 1e-3, doubled).value;
  const double gap = std::abs(value - 2.0);
  o.require(gap <= 1e-4, "estimate " + std::to_string(value) + " is not 2 f'(0)");
  if (o.pass) o.detail << "2 x lanczos on exp at h=1e-3 gives " << value;
  return o;
}

// 9. Constant weight through the boundary term is the central difference.
Outcome central_difference_recovery() {
  Outcome o;
  const auto w = constant_weight();
  double worst = 0.0;
  for (const auto& fn : test_corpus()) {
    for (double x0 : {-0.5, 0.0, 0.25, 1.0}) {
      for (double h : {0.5, 0.1, 1e-2, 1e-3}) {
        const double cd = central_difference(fn.f, x0, h);
        const double gap = std::abs(boundary_term_derivative(fn.f, x0, h, w) - cd);
        worst = std::max(worst, gap);
        o.require(gap <= 1e-12, fn.id + " x0=" + std::to_string(x0) + " h=" + std::to_string(h) + " off by " + sci(gap));
      }
    }
  }
  if (o.pass) o.detail << "corpus of " << test_corpus().size() << " functions, worst gap " << sci(worst);
  return o;
}

const std::vector<std::pair<std::string, std::function<Outcome()>>>& criteria() {
  static const std::vector<std::pair<std::string, std::function<Outcome()>>> list = {
      {"bump constant K", constant_k},
      {"Legendre area identity", legendre_identity},
      {"kernel validity suite", kernel_validity},
      {"bump prefactor regression", prefactor_regression},
      {"polynomial exactness", exactness},
      {"convergence", convergence},
      {"Fabius suite", fabius_suite},
      {"wrong normalization", wrong_normalization},
      {"central-difference recovery", central_difference_recovery},
  };
  return list;
}

bool run_one(std::size_t index) {
  const auto& [name, fn] = criteria()[index - 1];
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << "threw: " << e.what();
  }
  std::cout << (o.pass ? "PASS" : "FAIL") << "  " << index << "  " << name << ": " << o.detail.str() << std::endl;
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t count = criteria().size();
  if (argc > 2) {
    std::cerr << "usage: acceptance [criterion 1.." << count << "]\n";
    return 2;
  }
  if (argc == 2) {
    const std::string arg = argv[1];
    std::size_t index = 0;
    try {
      index = std::stoul(arg);
    } catch (const std::exception&) {
    }
    if (index < 1 || index > count) {
      std::cerr << "unknown criterion '" << arg << "'\n";
      return 2;
    }
    return run_one(index) ? 0 : 1;
  }
  bool all = true;
  for (std::size_t i = 1; i <= count; ++i) all = run_one(i) && all;
  return all ? 0 : 1;
}
