#include "lanczos/differentiator.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "lanczos/csv.hpp"
#include "lanczos/error.hpp"

namespace lanczos {

DerivativeEstimate estimate(const RealFn& f, double x0, int n, double h, const KernelSpec& kernel,
                            double quad_tol) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "derivative order must be >= 1");
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "h must be positive");
  if (kernel.order != n) {
    throw Error(ErrorCode::OrderMismatch, "kernel '" + kernel.id + "' has order " + std::to_string(kernel.order) +
                                              ", requested " + std::to_string(n));
  }
  const auto& k = kernel.eval;
  const auto integral = integrate([&](double t) { return k(t) * f(x0 + h * t); }, -1.0, 1.0, quad_tol);

  const double scale = std::pow(-1.0 / h, n);
  DerivativeEstimate result;
  result.value = scale * integral.value;
  result.order = n;
  result.h = h;
  result.x0 = x0;
  result.kernel_id = kernel.id;
  result.quad_error = std::abs(scale) * integral.error_estimate;
  result.converged = integral.converged;
  return result;
}

double central_difference(const RealFn& f, double x0, double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "h must be positive");
  return (f(x0 + h) - f(x0 - h)) / (2.0 * h);
}

double boundary_term_derivative(const RealFn& f, double x0, double h, const WeightSpec& weight, double quad_tol) {
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "h must be positive");
  const auto derivative = weight.derivative(1);
  if (!derivative) throw Error(ErrorCode::UnsupportedOrder, "weight '" + weight.id + "' has no first derivative");
  const double boundary = (weight.eval(1.0) * f(x0 + h) - weight.eval(-1.0) * f(x0 - h)) / h;
  const auto& dw = *derivative;
  const auto interior = integrate([&](double t) { return dw(t) * f(x0 + h * t); }, -1.0, 1.0, quad_tol);
  if (!interior.converged) throw Error(ErrorCode::NonConvergence, "boundary-term integral did not converge");
  return boundary - interior.value / h;
}

// ---------------------------------------------------------------------------

std::optional<double> loglog_slope(std::span<const double> x, std::span<const double> y) {
  double sx = 0.0;
  double sy = 0.0;
  double sxx = 0.0;
  double sxy = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0) || !std::isfinite(x[i]) || !std::isfinite(y[i])) continue;
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++count;
  }
  if (count < 2) return std::nullopt;
  const double denominator = count * sxx - sx * sx;
  if (std::abs(denominator) < 1e-300) return std::nullopt;
  return (count * sxy - sx * sy) / denominator;
}

SweepResult sweep(const RealFn& f, double x0, int n, const KernelSpec& kernel, std::span<const double> h_values,
                  std::optional<double> reference, double quad_tol) {
  if (h_values.empty()) throw Error(ErrorCode::InvalidArgument, "sweep needs at least one h");
  for (std::size_t i = 0; i < h_values.size(); ++i) {
    if (!(h_values[i] > 0.0)) throw Error(ErrorCode::InvalidArgument, "sweep h values must be positive");
    if (i > 0 && !(h_values[i] < h_values[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "sweep h values must be strictly decreasing");
    }
  }
  if (kernel.order != n) {
    throw Error(ErrorCode::OrderMismatch, "kernel '" + kernel.id + "' has order " + std::to_string(kernel.order) +
                                              ", requested " + std::to_string(n));
  }

  SweepResult result;
  result.kernel_id = kernel.id;
  result.order = n;
  result.x0 = x0;
  result.reference = reference;

  std::vector<double> hs;
  std::vector<double> errors;
  for (const double h : h_values) {
    SweepRow row;
    row.h = h;
    try {
      const auto e = estimate(f, x0, n, h, kernel, quad_tol);
      row.estimate = e.value;
      row.quad_error = e.quad_error;
      if (!e.converged) {
        row.ok = false;
        row.error = "quadrature did not converge";
      }
    } catch (const Error& e) {
      row.ok = false;
      row.error = e.what();
      row.estimate = std::nan("");
      row.quad_error = std::nan("");
    }
    if (reference) {
      row.abs_error = std::abs(row.estimate - *reference);
      if (row.ok) {
        hs.push_back(h);
        errors.push_back(*row.abs_error);
      }
    }
    result.rows.push_back(std::move(row));
  }
  if (reference) result.observed_order = loglog_slope(hs, errors);
  return result;
}

void SweepResult::write_csv(std::ostream& out) const {
  const bool with_error = reference.has_value();
  out << (with_error ? "h,estimate,abs_error,quad_error\n" : "h,estimate,quad_error\n");
  for (const auto& row : rows) {
    out << csv::format_double(row.h) << ',' << csv::format_double(row.estimate) << ',';
    if (with_error) out << csv::format_double(row.abs_error.value_or(std::nan(""))) << ',';
    out << csv::format_double(row.quad_error) << '\n';
  }
}

std::string SweepResult::to_text() const {
  std::ostringstream out;
  out.precision(10);
  out << "kernel " << kernel_id << "  order " << order << "  x0 " << x0;
  if (reference) out << "  reference " << *reference;
  out << '\n';
  for (const auto& row : rows) {
    out << "  h " << row.h << "  estimate " << row.estimate;
    if (row.abs_error) out << "  abs_error " << *row.abs_error;
    out << "  quad_error " << row.quad_error;
    if (!row.ok) out << "  [" << row.error << ']';
    out << '\n';
  }
  if (observed_order) out << "observed order " << *observed_order << '\n';
  return out.str();
}

std::vector<SweepRow> read_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::Io, "empty sweep CSV");
  const auto header = csv::split(csv::trim(line));
  bool with_error = false;
  if (header == std::vector<std::string>{"h", "estimate", "abs_error", "quad_error"}) {
    with_error = true;
  } else if (header != std::vector<std::string>{"h", "estimate", "quad_error"}) {
    throw Error(ErrorCode::Io, "unexpected sweep CSV header '" + line + "'");
  }
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (csv::trim(line).empty()) continue;
    const auto fields = csv::split(csv::trim(line));
    if (fields.size() != (with_error ? 4u : 3u)) throw Error(ErrorCode::Io, "bad sweep CSV row '" + line + "'");
    SweepRow row;
    row.h = csv::parse_double(fields[0]);
    row.estimate = csv::parse_double(fields[1]);
    if (with_error) row.abs_error = csv::parse_double(fields[2]);
    row.quad_error = csv::parse_double(fields.back());
    row.ok = std::isfinite(row.estimate);
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------

TestFunction polynomial_function(std::vector<double> coefficients) {
  if (coefficients.empty()) coefficients.push_back(0.0);
  std::ostringstream id;
  id.precision(17);
  id << "poly:";
  for (std::size_t i = 0; i < coefficients.size(); ++i) id << (i ? "," : "") << coefficients[i];

  auto derivative_coefficients = [coefficients](int n) {
    std::vector<double> c = coefficients;
    for (int k = 0; k < n && !c.empty(); ++k) {
      std::vector<double> d;
      for (std::size_t i = 1; i < c.size(); ++i) d.push_back(c[i] * static_cast<double>(i));
      c = std::move(d);
    }
    return c;
  };
  auto horner = [](const std::vector<double>& c, double x) {
    double sum = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) sum = sum * x + *it;
    return sum;
  };

  TestFunction fn;
  fn.id = id.str();
  fn.f = [coefficients, horner](double x) { return horner(coefficients, x); };
  fn.derivative = [derivative_coefficients, horner](int n, double x) -> std::optional<double> {
    return horner(derivative_coefficients(n), x);
  };
  return fn;
}

std::vector<TestFunction> test_corpus() {
  std::vector<TestFunction> corpus;
  corpus.push_back({"exp", [](double x) { return std::exp(x); },
                    [](int, double x) -> std::optional<double> { return std::exp(x); }});
  corpus.push_back({"sin", [](double x) { return std::sin(x); },
                    [](int n, double x) -> std::optional<double> {
                      return std::sin(x + n * std::numbers::pi / 2.0);
                    }});
  corpus.push_back({"cos", [](double x) { return std::cos(x); },
                    [](int n, double x) -> std::optional<double> {
                      return std::cos(x + n * std::numbers::pi / 2.0);
                    }});
  corpus.push_back({"abs", [](double x) { return std::abs(x); },
                    [](int n, double x) -> std::optional<double> {
                      if (x == 0.0) return std::nullopt;
                      return n == 1 ? std::copysign(1.0, x) : 0.0;
                    }});
  corpus.push_back({"xabs", [](double x) { return x * std::abs(x); },
                    [](int n, double x) -> std::optional<double> {
                      if (n == 1) return 2.0 * std::abs(x);
                      if (x == 0.0) return std::nullopt;
                      return n == 2 ? 2.0 * std::copysign(1.0, x) : 0.0;
                    }});
  corpus.push_back({"smoothstep", [](double x) { return 0.5 * (1.0 + std::tanh(10.0 * x)); },
                    [](int n, double x) -> std::optional<double> {
                      const double th = std::tanh(10.0 * x);
                      const double sech2 = 1.0 - th * th;
                      if (n == 1) return 5.0 * sech2;
                      if (n == 2) return -100.0 * sech2 * th;
                      return std::nullopt;
                    }});
  for (int degree = 0; degree <= 6; ++degree) {
    std::vector<double> c(static_cast<std::size_t>(degree) + 1, 0.0);
    c.back() = 1.0;
    corpus.push_back(polynomial_function(std::move(c)));
  }
  return corpus;
}

}  // namespace lanczos
